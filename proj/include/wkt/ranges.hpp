#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "wkt/errors.hpp"
#include "wkt/gauges.hpp"
#include "wkt/kernel.hpp"
#include "wkt/profile.hpp"
#include "wkt/transform.hpp"

namespace wkt {

struct RangeOptions {
  double rel_tol = 1e-6;   // bracketing of the thresholds
  int probe_doublings = 10;  // K, 2K, ..., 2^10 K re-checked after bisection
  int lambda_probes = 64;  // per decision in the d = 2, 3 amendments
  double probe_span = 1e4; // probes cover [eta/K, span * eta/K]
  double quad_tol = 1e-9;
};

namespace detail {

// Smallest K in a log-bisection sense with ok(K), given ok(hi) and !ok(lo).
template <class Ok>
double bisect_log(Ok&& ok, double lo, double hi, double rel_tol) {
  while (hi / lo > 1.0 + rel_tol) {
    const double m = std::sqrt(lo * hi);
    if (ok(m)) hi = m; else lo = m;
  }
  return hi;
}

inline double start_point(const Profile& p) {
  const Interval s = p.scale();
  return std::sqrt(s.lo * s.hi);
}

}  // namespace detail

// Small-scale threshold: smallest K with K^2 int_K^inf f <= (delta^4/2) int_0^K k^2 f for all
// larger K; for d <= 2 also int_K^inf k^2 f <= (delta^2/2) int_0^K k^2 f.
inline double k_sharp(Dim d, const Profile& p, double delta, const RangeOptions& o = {}) {
  const KernelConstants kc = kernel_constants(d);
  if (!(delta > 0 && delta <= kc.delta0 * (1 + 1e-12))) throw PreconditionError("k_sharp: need 0 < delta <= delta0");
  const Interval s = p.support();
  const double t1 = 0.5 * std::pow(delta, 4), t2 = 0.5 * delta * delta;
  if (int(d) <= 2) moment(p, 2, s.lo, s.hi, 1e-9);  // throws when the second moment diverges
  auto ok = [&](double K) {
    if (K >= s.hi) return true;
    const double head = moment(p, 2, 0.0, K, o.quad_tol);
    if (!(head > 0)) return false;
    const double tail = moment(p, 0, K, inf, o.quad_tol);
    if (K * K * tail > t1 * head) return false;
    if (int(d) <= 2 && moment(p, 2, K, inf, o.quad_tol) > t2 * head) return false;
    return true;
  };
  double K = std::min(detail::start_point(p), std::isfinite(s.hi) ? s.hi : inf);
  double lo, hi;
  if (ok(K)) {
    hi = K;
    lo = K / 2;
    while (ok(lo)) {
      hi = lo;
      lo /= 2;
      if (lo < 1e-300) return hi;
    }
  } else {
    lo = K;
    hi = 2 * K;
    while (!ok(hi)) {
      lo = hi;
      hi *= 2;
      if (hi > 1e300) throw DivergenceError("k_sharp: tail condition never met");
    }
  }
  for (int round = 0; round < 64; ++round) {
    const double k = detail::bisect_log(ok, lo, hi, o.rel_tol);
    // the condition must hold for every K' >= k
    double bad = 0.0;
    for (int j = 1; j <= o.probe_doublings; ++j)
      if (!ok(k * std::ldexp(1.0, j))) bad = k * std::ldexp(1.0, j);
    if (bad == 0.0) return k;
    lo = bad;
    hi = 2 * bad;
    while (!ok(hi)) {
      lo = hi;
      hi *= 2;
      if (hi > 1e300) throw DivergenceError("k_sharp: tail condition never met");
    }
  }
  throw ToleranceError("k_sharp: re-bracketing did not settle");
}

// Amendment probe for d = 2, 3: largest violating lambda on the grid [eta/K, span eta/K], or 0.
inline double amendment_violation(Dim d, const Profile& p, double eta, double K, double total,
                                  const RangeOptions& o = {}) {
  const int dd = d;
  if (dd != 2 && dd != 3) return 0.0;
  const double bound = dd == 3 ? total / eta : total / std::sqrt(eta);
  const double l0 = eta / K;
  double worst = 0.0;
  for (int j = 0; j < o.lambda_probes; ++j) {
    const double l = l0 * std::pow(o.probe_span, double(j) / (o.lambda_probes - 1));
    double m;
    if (dd == 3) {
      const double c = integrate_kernel(fourier_kernel(false), p, l, o.quad_tol, total).value;
      const double sn = integrate_kernel(fourier_kernel(true), p, l, o.quad_tol, total).value;
      m = std::hypot(c, sn);
    } else {
      m = std::abs(integrate_kernel(bessel_j1_kernel(), p, l, o.quad_tol, total).value);
    }
    if (m > bound) worst = l;
  }
  return worst;
}

// Large-scale threshold: largest K with int_0^K f <= (1/2) eta^{-(d-1)/2} int_K^inf f, then
// shrunk for d = 2, 3 until the oscillatory amendment holds on the probe grid.
inline double k_flat(Dim d, const Profile& p, double eta, const RangeOptions& o = {}) {
  if (int(d) < 2) throw PreconditionError("k_flat: needs d >= 2");
  const KernelConstants kc = kernel_constants(d);
  if (!(eta >= kc.eta0 * (1 - 1e-12))) throw PreconditionError("k_flat: need eta >= eta0");
  const double c = 0.5 * std::pow(eta, -0.5 * (int(d) - 1));
  const double total = moment(p, 0, 0.0, inf, o.quad_tol);
  const Interval s = p.support();
  auto ok = [&](double K) {
    if (K <= s.lo) return true;
    if (K >= s.hi) return false;
    const double head = moment(p, 0, 0.0, K, o.quad_tol), tail = moment(p, 0, K, inf, o.quad_tol);
    return head <= c * tail;
  };
  // largest K with ok(K): bracket ok(lo), !ok(hi)
  double K = std::isfinite(s.hi) ? std::min(detail::start_point(p), s.hi) : detail::start_point(p);
  if (s.lo > 0) K = std::max(K, s.lo);
  double lo, hi;
  if (ok(K)) {
    lo = K;
    hi = 2 * K;
    while (ok(hi)) {
      lo = hi;
      hi *= 2;
      if (hi > 1e300) throw DivergenceError("k_flat: head condition holds everywhere");
    }
  } else {
    hi = K;
    lo = K / 2;
    while (!ok(lo)) {
      hi = lo;
      lo /= 2;
      if (lo < 1e-300) throw DivergenceError("k_flat: head condition never holds");
    }
  }
  while (hi / lo > 1.0 + o.rel_tol) {
    const double m = std::sqrt(lo * hi);
    if (ok(m)) lo = m; else hi = m;
  }
  double k = lo;
  for (int round = 0; round < 100; ++round) {
    const double bad = amendment_violation(d, p, eta, k, total, o);
    if (bad == 0.0) return k;
    k = eta / bad * (1.0 - 1e-9);  // every lambda up to the violation must be excluded
  }
  throw ToleranceError("k_flat: amendment did not settle");
}

// sigma_alpha(eps, mu) = (alpha-1)(pi eps)^{3-alpha} + (3-alpha)(pi mu)^{-(alpha-1)}.
inline double sigma_alpha(double alpha, double eps, double mu) {
  if (!(alpha > 1 && alpha < 3)) throw DomainError("sigma_alpha: alpha must lie in (1, 3)");
  if (!(eps > 0 && mu > 0)) throw DomainError("sigma_alpha: eps and mu must be positive");
  return (alpha - 1) * std::pow(pi * eps, 3 - alpha) + (3 - alpha) * std::pow(pi * mu, -(alpha - 1));
}

struct EpsMu {
  double eps = 0.0, mu = 0.0;
  double ratio = 0.0;  // mu / eps
};

// Point of the level set sigma_alpha = target with the smallest mu/eps, by golden
// section along the curve. The curve is parameterized by the share u of the target
// carried by the eps term.
inline EpsMu optimal_eps_mu(double alpha, double target) {
  if (!(alpha > 1 && alpha < 3)) throw DomainError("optimal_eps_mu: alpha must lie in (1, 3)");
  if (!(target > 0)) throw DomainError("optimal_eps_mu: target must be positive");
  auto at = [&](double u) {
    EpsMu r;
    r.eps = std::pow(u * target / (alpha - 1), 1 / (3 - alpha)) / pi;
    r.mu = std::pow((1 - u) * target / (3 - alpha), -1 / (alpha - 1)) / pi;
    r.ratio = r.mu / r.eps;
    return r;
  };
  auto obj = [&](double u) { return -std::log(at(u).ratio); };
  auto [u, v] = detail::golden_max(obj, 1e-12, 1 - 1e-12, 200, 0.5, obj(0.5));
  (void)v;
  return at(u);
}

// inf { mu/eps : sigma_alpha(eps, mu) <= target } = (2/target)^{1/(alpha-1) + 1/(3-alpha)}.
inline double min_reynolds(double alpha, double target) {
  if (!(alpha > 1 && alpha < 3)) throw DomainError("min_reynolds: alpha must lie in (1, 3)");
  if (!(target > 0)) throw DomainError("min_reynolds: target must be positive");
  return std::pow(2.0 / target, 1 / (alpha - 1) + 1 / (3 - alpha));
}

struct RangePlan {
  int d = 3;
  double alpha = 0.0;
  Interval spectral_interval{};
  double eps = 0.0, mu = 0.0;
  double sigma_value = 0.0;
  Interval dual_interval{};
  bool feasible = false;
  double rhs_bound = 0.0;
  // ingredients
  double target = 0.0;        // T, after the floor
  bool target_floored = false;
  double min_ratio = 0.0;     // achieved min mu/eps on the level set
  double big_c = 0.0;         // dual-range constant for this dimension
  double c1 = 0.0, c2 = 0.0;  // head and tail ratios
  double p_inf = 0.0, p_zero = 0.0;  // gauges of f with exponent -alpha on [k1, k2]
};

// Dual-range constant C from the head/tail ratios, per dimension case.
inline double thm4_constant(Dim dim, double alpha, double c1, double c2) {
  const int d = dim;
  const KernelConstants kc = kernel_constants(dim);
  const double m = std::max(c1, c2);
  if (kc.c_minus == 0.0) return inf;
  const double r = kc.c_plus / kc.c_minus;
  if (d >= 3) return 4 * (1 + (alpha + 1) * m) * r;
  if (d == 2) return 4 * (1 + (alpha - 1) * m + std::max(4 * c1 / (kc.c_plus * pi * pi), (1 + c2) / kc.c_plus)) * r;
  return 4 * (1 + (alpha - 1) * m + std::max(4 * c1 / kc.c_plus, 2 * (1 + c2) / kc.c_plus)) * r;
}

inline RangePlan plan_dual_range(Dim d, const Profile& p, double alpha, double k1, double k2,
                                 const GaugeOptions& go = {}) {
  if (!(alpha > 1 && alpha < 3)) throw DomainError("plan_dual_range: alpha must lie in (1, 3)");
  if (!(k1 > 0 && k2 > k1 && std::isfinite(k2))) throw DomainError("plan_dual_range: need 0 < k1 < k2 < inf");
  const Interval s = p.support();
  if (k1 < s.lo || k2 > s.hi) throw DomainError("plan_dual_range: [k1, k2] must lie inside the support");
  RangePlan r;
  r.d = d;
  r.alpha = alpha;
  r.spectral_interval = {k1, k2};
  r.c1 = moment(p, 2, 0.0, k1) / (k1 * k1 * k1 * p(k1));
  r.c2 = moment(p, 0, k2, inf) / (k2 * p(k2));
  if (int(d) <= 2 && k2 < s.hi) {
    // int_{k2}^inf |f'| k dk = int |slope| f dk
    const Profile df(Profile::Analytic{"abs-derivative", [p](double k) { return p(k) * std::abs(p.slope(k)); }, {},
                                       [](double) { return 0.0; }, {k2, s.hi}, p.breakpoints(), p.scale()});
    r.c2 = std::max(r.c2, moment(df, 0, k2, inf) / (k2 * p(k2)));
  }
  const GaugeValue sup = gauge_inf_detail(p, -alpha, k1, k2, go);
  const ZeroGauge zero = gauge_zero_detail(p, -alpha, k1, k2, go);
  if (sup.divergent || zero.divergent || !std::isfinite(sup.value) || !std::isfinite(zero.value))
    throw GaugeError("plan_dual_range: gauges of f are infinite on [k1, k2]");
  r.p_inf = sup.value;
  r.p_zero = zero.value;
  r.big_c = thm4_constant(d, alpha, r.c1, r.c2);
  double t = std::min(1.0, r.big_c * r.p_inf * std::exp(-r.p_zero) / (1 + r.c1 + r.c2));
  if (!(t >= 1e-6)) {
    t = 1e-6;
    r.target_floored = true;
  }
  r.target = t;
  const EpsMu em = optimal_eps_mu(alpha, t);
  r.eps = em.eps;
  r.mu = em.mu;
  r.min_ratio = em.ratio;
  r.sigma_value = sigma_alpha(alpha, em.eps, em.mu);
  r.feasible = r.sigma_value <= 1.0 && em.ratio < k2 / k1;
  r.dual_interval = {em.mu / k2, em.eps / k1};
  r.rhs_bound = r.p_inf + r.big_c * std::exp(r.p_zero) * r.sigma_value;
  return r;
}

struct FlatSharpGap {
  double k_flat = 0.0, k_sharp = 0.0;
  bool gap_ok = false;
};

inline FlatSharpGap flat_sharp_gap(Dim d, const Profile& p, double delta, double eta, const RangeOptions& o = {}) {
  const KernelConstants kc = kernel_constants(d);
  if (int(d) < 2) throw PreconditionError("flat_sharp_gap: needs d >= 2");
  if (!(delta > 0 && delta <= kc.delta0 * (1 + 1e-12))) throw PreconditionError("flat_sharp_gap: need delta <= delta0");
  if (!(eta >= kc.eta0 * (1 - 1e-12))) throw PreconditionError("flat_sharp_gap: need eta >= eta0");
  FlatSharpGap g;
  g.k_flat = k_flat(d, p, eta, o);
  g.k_sharp = k_sharp(d, p, delta, o);
  g.gap_ok = g.k_flat < g.k_sharp;
  return g;
}

}  // namespace wkt
