#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wkt/errors.hpp"
#include "wkt/gauges.hpp"
#include "wkt/kernel.hpp"
#include "wkt/profile.hpp"
#include "wkt/ranges.hpp"
#include "wkt/transform.hpp"

namespace wkt {

enum class CheckStatus { pass, fail, inapplicable };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "inapplicable";
  }
}

// One measured inequality lhs <= rhs. passed <=> lhs <= rhs + slack, where the
// slack comes from quadrature error estimates and gauge grid uncertainties.
struct CheckReport {
  std::string id;
  double lhs = 0.0, rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double slack = 0.0;
  bool passed = false;
  CheckStatus status = CheckStatus::fail;
  std::string config;    // dimension, profile and parameters
  std::string numerics;  // tolerances and grids used
  std::string mode;      // explicit | regression | measured
  std::string note;
};

struct VerifyOptions {
  double tol = 1e-8;              // transform quadrature
  int points_per_decade = 32;     // gauge grid for transform curves
  double window_tol = 1e-4;       // growth of infinite-interval proxy windows
  double regression_tol = 0.15;   // on fitted log-log exponents
  int sweep_points_per_decade = 4;
};

namespace detail {

inline std::string fmt(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.6g", x);
  return b;
}

inline CheckReport settle(CheckReport r) {
  r.margin = r.rhs - r.lhs;
  r.passed = r.lhs <= r.rhs + r.slack;
  r.status = r.passed ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

inline CheckReport not_applicable(std::string id, std::string config, std::string note) {
  CheckReport r;
  r.id = std::move(id);
  r.config = std::move(config);
  r.note = std::move(note);
  r.lhs = r.rhs = r.margin = std::nan("");
  r.status = CheckStatus::inapplicable;
  r.mode = "n/a";
  return r;
}

inline std::string config_of(int d, const Profile& p, const std::string& extra = {}) {
  std::string s = "d=" + std::to_string(d) + " profile=" + p.name();
  if (!extra.empty()) s += " " + extra;
  return s;
}

inline std::string numerics_of(const VerifyOptions& o) {
  return "tol=" + fmt(o.tol) + " ppd=" + std::to_string(o.points_per_decade) + " window_tol=" + fmt(o.window_tol);
}

inline GaugeOptions wk_gauge_options(const VerifyOptions& o) {
  GaugeOptions g;
  g.points_per_decade = o.points_per_decade;
  g.window_tol = o.window_tol;
  g.abs_floor = o.tol * ln10;  // slope deviations below the quadrature tolerance
  return g;
}

// Largest quadrature error of the slope deviation on a coarse log grid of [lo, hi].
inline double slope_error(const WkView& v, double a, double lo, double hi, int ppd) {
  double e = 0.0;
  for (double l : log_grid(lo, hi, ppd)) e = std::max(e, wk_slope_offset(v.dim(), v.profile(), l, a, v.tol()).err);
  return e;
}

struct Fit {
  double slope = 0.0;
  double slack = 0.0;  // worst-case shift from relative errors rel[i] in y = log(value)
};

inline Fit fit_loglog(const std::vector<double>& x, const std::vector<double>& v, const std::vector<double>& unc) {
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(v[i]);
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  Fit f;
  f.slope = sxy / sxx;
  // |d slope / d y_i| = |x_i - mean| / sxx
  for (std::size_t i = 0; i < n; ++i) {
    const double rel = v[i] > 0 ? std::min(1.0, unc[i] / v[i]) : 1.0;
    f.slack += std::abs(lx[i] - mx) / sxx * std::log1p(rel);
  }
  return f;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Global duality: sup and integral slope gauges of WK_d[f] on (0, inf) against those of f.

inline std::vector<CheckReport> check_thm1(Dim d, const Profile& p, double alpha, const VerifyOptions& o = {}) {
  const std::string cfg = detail::config_of(d, p, "alpha=" + detail::fmt(alpha));
  if (int(d) < 2) throw PreconditionError("check_thm1: needs d >= 2");
  if (!(alpha > 1 && alpha < 3)) throw DomainError("check_thm1: alpha must lie in (1, 3)");
  const GaugeValue fi = gauge_inf_detail(p, -alpha, 0.0, inf);
  const GaugeValue f1 = gauge_one_detail(p, -alpha, 0.0, inf);
  const ZeroGauge f0 = gauge_zero_detail(p, -alpha, 0.0, inf);
  if (fi.divergent || f1.divergent || f0.divergent || !std::isfinite(fi.value) || !std::isfinite(f1.value) ||
      !std::isfinite(f0.value))
    return {detail::not_applicable("thm1.sup", cfg, "gauges of f infinite on (0, inf)"),
            detail::not_applicable("thm1.integral", cfg, "gauges of f infinite on (0, inf)")};
  const WkView v(d, p, o.tol);
  const GaugeOptions go = detail::wk_gauge_options(o);
  const GaugeValue wi = gauge_inf_detail(v, alpha - 1, 0.0, inf, go);
  const GaugeValue w1 = gauge_one_detail(v, alpha - 1, 0.0, inf, go);
  const double serr = detail::slope_error(v, alpha - 1, wi.window.lo, wi.window.hi, o.sweep_points_per_decade);
  const std::string win = " window=[" + detail::fmt(wi.window.lo) + "," + detail::fmt(wi.window.hi) + "]";

  CheckReport a;
  a.id = "thm1.sup";
  a.config = cfg;
  a.numerics = detail::numerics_of(o) + win;
  a.mode = "explicit";
  a.lhs = wi.value;
  a.rhs = fi.value;
  a.slack = wi.grid_uncertainty + fi.grid_uncertainty + serr;

  const KernelConstants kc = kernel_constants(d);
  CheckReport b;
  b.id = "thm1.integral";
  b.config = cfg;
  b.numerics = detail::numerics_of(o) + " window=[" + detail::fmt(w1.window.lo) + "," + detail::fmt(w1.window.hi) + "]";
  b.mode = "explicit";
  b.lhs = w1.value;
  b.rhs = kc.c_plus / kc.c_minus * f1.value * std::exp(2 * f0.value);
  b.slack = w1.grid_uncertainty + serr * std::log(w1.window.hi / w1.window.lo);
  if (w1.divergent) b.note = "transform gauge flagged divergent";
  return {detail::settle(a), detail::settle(b)};
}

// ---------------------------------------------------------------------------
// Quadratic regime at the origin.

inline std::vector<CheckReport> check_thm2(Dim d, const Profile& p, const std::vector<double>& deltas,
                                           const VerifyOptions& o = {}) {
  const std::string cfg = detail::config_of(d, p);
  const KernelConstants kc = kernel_constants(d);
  double m2 = 0.0;
  try {
    m2 = moment(p, 2, 0.0, inf);
  } catch (const DivergenceError&) {
    return {detail::not_applicable("thm2", cfg, "second moment of f diverges")};
  }
  (void)m2;
  double m4 = inf;
  try {
    m4 = moment(p, 4, 0.0, inf);
  } catch (const DivergenceError&) {
  }
  const WkView v(d, p, o.tol);
  const GaugeOptions go = detail::wk_gauge_options(o);
  std::vector<CheckReport> out;
  double b_min = inf;
  const double ks0 = k_sharp(d, p, kc.delta0);
  const double head0 = moment(p, 2, 0.0, ks0);
  for (double delta : deltas) {
    const std::string c = cfg + " delta=" + detail::fmt(delta);
    const double ks = k_sharp(d, p, delta);
    const double b = delta / ks;
    b_min = std::min(b_min, b);
    const GaugeValue g = gauge_inf_detail(v, 2.0, 0.0, b, go);
    CheckReport r;
    r.id = "thm2.sup";
    r.config = c + " K_sharp=" + detail::fmt(ks);
    r.numerics = detail::numerics_of(o) + " window=[" + detail::fmt(g.window.lo) + "," + detail::fmt(b) + "]";
    r.mode = "explicit";
    r.lhs = g.value;
    r.rhs = 3 * int(d) * kc.big_c_l / (2 * pi * pi) * delta * delta;
    r.slack = g.grid_uncertainty + detail::slope_error(v, 2.0, g.window.lo, b, o.sweep_points_per_decade);
    out.push_back(detail::settle(r));

    if (std::isfinite(m4)) {
      // integral gauge with the fourth-moment constant of the proof
      const GaugeValue g1 = gauge_one_detail(v, 2.0, 0.0, b, go);
      CheckReport s;
      s.id = "thm2.integral";
      s.config = r.config;
      s.numerics = r.numerics;
      s.mode = "explicit";
      s.lhs = g1.value;
      s.rhs = kc.big_c_l * kc.delta0 * kc.delta0 * m4 / head0 * b * b;
      s.slack = g1.grid_uncertainty;
      if (ks0 < 1.0) s.note = "K_sharp(delta0) < 1: the constant assumes K_sharp(delta0) >= 1";
      out.push_back(detail::settle(s));
    }
  }
  if (int(d) >= 3) {
    // slope < 2 on a sweep from below the smallest window to beyond the profile scale
    const double lo = 0.1 * b_min, hi = 1e3 / p.scale().lo;
    double worst = -inf, err = 0.0, at = lo;
    for (double l : log_grid(lo, hi, o.sweep_points_per_decade)) {
      const SlopeResult s = wk_slope_detail(d, p, l, o.tol);
      if (s.slope > worst) {
        worst = s.slope;
        err = s.err;
        at = l;
      }
    }
    CheckReport r;
    r.id = "thm2.upper_slope";
    r.config = cfg;
    r.numerics = "tol=" + detail::fmt(o.tol) + " sweep=[" + detail::fmt(lo) + "," + detail::fmt(hi) + "] ppd=" +
                 std::to_string(o.sweep_points_per_decade);
    r.mode = "explicit";
    r.lhs = worst;
    r.rhs = 2.0;
    r.slack = err;
    r.note = "max at lambda=" + detail::fmt(at);
    r = detail::settle(r);
    r.passed = r.passed && worst < 2.0 + err;
    out.push_back(r);
  }
  return out;
}

// Integral gauge P_1^2(0, b) against b: the fitted exponent must be 2.
inline CheckReport check_thm2_exponent(Dim d, const Profile& p, const std::vector<double>& b_list,
                                       const VerifyOptions& o = {}) {
  const std::string cfg = detail::config_of(d, p);
  try {
    moment(p, 2, 0.0, inf);
  } catch (const DivergenceError&) {
    return detail::not_applicable("thm2.exponent", cfg, "second moment of f diverges");
  }
  const WkView v(d, p, o.tol);
  const GaugeOptions go = detail::wk_gauge_options(o);
  std::vector<double> val, unc;
  std::string meas;
  for (double b : b_list) {
    const GaugeValue g = gauge_one_detail(v, 2.0, 0.0, b, go);
    const double e = detail::slope_error(v, 2.0, g.window.lo, b, o.sweep_points_per_decade);
    val.push_back(g.value);
    unc.push_back(g.grid_uncertainty + e * std::log(b / g.window.lo));
    meas += (meas.empty() ? "" : ";") + detail::fmt(b) + ":" + detail::fmt(g.value);
  }
  const detail::Fit f = detail::fit_loglog(b_list, val, unc);
  CheckReport r;
  r.id = "thm2.exponent";
  r.config = cfg + " b=[" + detail::fmt(b_list.front()) + "," + detail::fmt(b_list.back()) + "]";
  r.numerics = detail::numerics_of(o);
  r.mode = "regression";
  r.lhs = std::abs(f.slope - 2.0);
  r.rhs = 0.2;
  r.slack = f.slack;
  r.note = "exponent=" + detail::fmt(f.slope) + " gauges " + meas;
  return detail::settle(r);
}

// ---------------------------------------------------------------------------
// Constant regime at infinity.

inline std::vector<CheckReport> check_thm3(Dim d, const Profile& p, const std::vector<double>& etas,
                                           const VerifyOptions& o = {}) {
  const std::string cfg = detail::config_of(d, p);
  if (int(d) < 2) throw PreconditionError("check_thm3: needs d >= 2");
  double total = 0.0;
  try {
    total = moment(p, 0, 0.0, inf);
  } catch (const DivergenceError&) {
    return {detail::not_applicable("thm3", cfg, "integral of f diverges")};
  }
  const KernelConstants kc = kernel_constants(d);
  const WkView v(d, p, o.tol);
  const GaugeOptions go = detail::wk_gauge_options(o);
  std::vector<CheckReport> out;
  std::vector<double> val, unc;
  std::string meas;
  for (double eta : etas) {
    const double kf = k_flat(d, p, eta);
    const double lo = eta / kf;
    const GaugeValue g = gauge_inf_detail(v, 0.0, lo, inf, go);
    const double e = detail::slope_error(v, 0.0, lo, g.window.hi, o.sweep_points_per_decade);
    val.push_back(g.value);
    unc.push_back(g.grid_uncertainty + e);
    meas += (meas.empty() ? "" : ";") + detail::fmt(eta) + ":" + detail::fmt(g.value);

    // |WK(lambda) - int f| <= (eta/eta0)^{-(d-1)/2} int_{K_flat}^inf f at lambda = eta / K_flat
    const PointResult w = wk_point(d, p, lo, o.tol);
    CheckReport r;
    r.id = "thm3.limit_bound";
    r.config = cfg + " eta=" + detail::fmt(eta) + " K_flat=" + detail::fmt(kf);
    r.numerics = "tol=" + detail::fmt(o.tol);
    r.mode = "explicit";
    r.lhs = std::abs(w.value - total);
    r.rhs = std::pow(eta / kc.eta0, -0.5 * (int(d) - 1)) * moment(p, 0, kf, inf);
    r.slack = w.err + 1e-9 * total;
    out.push_back(detail::settle(r));
  }
  if (etas.size() >= 2) {
    const detail::Fit f = detail::fit_loglog(etas, val, unc);
    const double expected = int(d) >= 4 ? -0.5 * (int(d) - 3) : -0.5 * (int(d) - 1);
    CheckReport r;
    r.id = "thm3.decay";
    r.config = cfg + " eta=[" + detail::fmt(etas.front()) + "," + detail::fmt(etas.back()) + "]";
    r.numerics = detail::numerics_of(o);
    r.mode = "regression";
    r.lhs = f.slope;
    r.rhs = expected + o.regression_tol;
    r.slack = f.slack;
    r.note = "gauges " + meas;
    out.push_back(detail::settle(r));
  }
  {
    const double big = 1e3 / (std::isfinite(p.support().hi) ? p.support().hi : p.scale().lo);
    const PointResult w = wk_point(d, p, big, o.tol);
    CheckReport r;
    r.id = "thm3.limit";
    r.config = cfg + " lambda=" + detail::fmt(big);
    r.numerics = "tol=" + detail::fmt(o.tol);
    r.mode = "explicit";
    r.lhs = std::abs(w.value - total) / total;
    r.rhs = 1e-2;
    r.slack = w.err / total;
    out.push_back(detail::settle(r));
  }
  if (int(d) >= 3) {
    const GaugeValue g = gauge_inf_detail(v, 0.0, 0.0, inf, go);
    CheckReport r;
    r.id = "thm3.global_slope";
    r.config = cfg;
    r.numerics = detail::numerics_of(o) + " window=[" + detail::fmt(g.window.lo) + "," + detail::fmt(g.window.hi) + "]";
    r.mode = "explicit";
    r.lhs = g.value;
    r.rhs = 2.0;
    r.slack = g.grid_uncertainty + detail::slope_error(v, 0.0, g.window.lo, g.window.hi, o.sweep_points_per_decade);
    out.push_back(detail::settle(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite-range duality.

// (eps, mu) from the plan, or from the sigma = 1 level set when the planned
// target is degenerate; nullopt when neither fits in [k1, k2].
struct DualChoice {
  double eps = 0.0, mu = 0.0, sigma = 0.0;
  std::string mode;
};

inline std::optional<DualChoice> dual_choice(const RangePlan& plan, double alpha, double k1, double k2) {
  if (plan.feasible) return DualChoice{plan.eps, plan.mu, plan.sigma_value, "planned target"};
  const EpsMu em = optimal_eps_mu(alpha, 1.0);
  if (em.ratio < k2 / k1) return DualChoice{em.eps, em.mu, sigma_alpha(alpha, em.eps, em.mu), "sigma=1 level set"};
  return std::nullopt;
}

inline CheckReport check_thm4(Dim d, const Profile& p, double alpha, double k1, double k2,
                              const VerifyOptions& o = {}) {
  const std::string cfg = detail::config_of(d, p, "alpha=" + detail::fmt(alpha) + " k=[" + detail::fmt(k1) + "," +
                                                      detail::fmt(k2) + "]");
  RangePlan plan;
  try {
    plan = plan_dual_range(d, p, alpha, k1, k2);
  } catch (const GaugeError& e) {
    return detail::not_applicable("thm4", cfg, e.what());
  }
  const auto choice = dual_choice(plan, alpha, k1, k2);
  if (!choice) return detail::not_applicable("thm4", cfg, "no admissible (eps, mu): k2/k1 below the minimal ratio");
  const double lo = choice->mu / k2, hi = choice->eps / k1;
  const WkView v(d, p, o.tol);
  const GaugeValue g = gauge_inf_detail(v, alpha - 1, lo, hi, detail::wk_gauge_options(o));
  CheckReport r;
  r.id = "thm4";
  r.config = cfg + " dual=[" + detail::fmt(lo) + "," + detail::fmt(hi) + "]";
  r.numerics = detail::numerics_of(o);
  r.mode = "explicit (" + choice->mode + ")";
  r.lhs = g.value;
  r.rhs = plan.p_inf + plan.big_c * std::exp(plan.p_zero) * choice->sigma;
  r.slack = g.grid_uncertainty + detail::slope_error(v, alpha - 1, lo, hi, o.sweep_points_per_decade);
  r.note = "C=" + detail::fmt(plan.big_c) + " sigma=" + detail::fmt(choice->sigma) +
           " decades=" + detail::fmt(std::log10(hi / lo));
  return detail::settle(r);
}

// Mean log-log slope of WK_d[f] over the dual interval of [k1, k2] (sigma = 1
// level set) against alpha - 1, for profiles that are exact power laws there.
inline CheckReport check_plateau(Dim d, const Profile& p, double alpha, double k1, double k2, double tolerance = 0.1,
                                 const VerifyOptions& o = {}) {
  const std::string cfg = detail::config_of(d, p, "alpha=" + detail::fmt(alpha) + " k=[" + detail::fmt(k1) + "," +
                                                      detail::fmt(k2) + "]");
  const EpsMu em = optimal_eps_mu(alpha, 1.0);
  if (!(em.ratio < k2 / k1)) return detail::not_applicable("thm4.plateau", cfg, "k2/k1 below the minimal ratio");
  const double lo = em.mu / k2, hi = em.eps / k1;
  const PointResult a = wk_point(d, p, lo, o.tol), b = wk_point(d, p, hi, o.tol);
  const double mean = std::log(b.value / a.value) / std::log(hi / lo);
  CheckReport r;
  r.id = "thm4.plateau";
  r.config = cfg + " dual=[" + detail::fmt(lo) + "," + detail::fmt(hi) + "]";
  r.numerics = "tol=" + detail::fmt(o.tol);
  r.mode = "measured";
  r.lhs = std::abs(mean - (alpha - 1));
  r.rhs = tolerance;
  r.slack = (a.err / a.value + b.err / b.value) / std::log(hi / lo);
  r.note = "mean slope=" + detail::fmt(mean);
  return detail::settle(r);
}

// ---------------------------------------------------------------------------
// Comparison principles.

inline std::vector<CheckReport> check_comparisons(const Profile& p, const VerifyOptions& o = {},
                                                  double lambda_lo = 1e-3, double lambda_hi = 1e3) {
  std::vector<CheckReport> out;
  const std::vector<double> grid = log_grid(lambda_lo, lambda_hi, o.sweep_points_per_decade);
  const std::string range = " lambda=[" + detail::fmt(lambda_lo) + "," + detail::fmt(lambda_hi) + "]";
  const std::string num = "tol=" + detail::fmt(o.tol) + " ppd=" + std::to_string(o.sweep_points_per_decade);

  // sandwich (d+1)/(d+2) WK_{d+1} <= WK_d <= (d+1)/d WK_{d+1}
  for (int d : {2, 3, 4}) {
    double lo_ratio = inf, hi_ratio = 0.0, rel = 0.0;
    for (double l : grid) {
      const PointResult a = wk_point(Dim(d), p, l, o.tol), b = wk_point(Dim(d + 1), p, l, o.tol);
      const double r = a.value / b.value;
      lo_ratio = std::min(lo_ratio, r);
      hi_ratio = std::max(hi_ratio, r);
      rel = std::max(rel, a.err / a.value + b.err / b.value);
    }
    const double bl = double(d + 1) / (d + 2), bh = double(d + 1) / d;
    CheckReport lo;
    lo.id = "comparison.sandwich_lower";
    lo.config = detail::config_of(d, p, "vs d=" + std::to_string(d + 1)) + range;
    lo.numerics = num;
    lo.mode = "explicit";
    lo.lhs = bl;
    lo.rhs = lo_ratio;
    lo.slack = rel * bh;
    out.push_back(detail::settle(lo));
    CheckReport hi = lo;
    hi.id = "comparison.sandwich_upper";
    hi.lhs = hi_ratio;
    hi.rhs = bh;
    out.push_back(detail::settle(hi));
  }

  // f <= g with g = 1.1 f + a log-normal bump at the profile scale
  {
    const Interval sc = p.scale();
    const double kc = std::sqrt(sc.lo * sc.hi), fc = p(std::clamp(kc, p.support().lo, p.support().hi));
    const Profile q = p;
    auto bump = [kc, fc](double k) {
      const double u = std::log(k / kc);
      return fc * std::exp(-u * u);
    };
    const Profile g(Profile::Analytic{
        p.name() + "+bump", [q, bump](double k) { return 1.1 * q(k) + bump(k); }, {},
        [q, bump, kc](double k) {
          const double fk = q(k), b = bump(k);
          const double sf = fk > 0 ? q.slope(k) : 0.0;
          return (1.1 * fk * sf - 2.0 * std::log(k / kc) * b) / (1.1 * fk + b);
        },
        {0.0, inf}, q.breakpoints(), sc});
    double worst = 0.0, rel = 0.0;
    for (double l : grid) {
      const PointResult a = wk_point(Dim(3), p, l, o.tol), b = wk_point(Dim(3), g, l, o.tol);
      worst = std::max(worst, a.value / b.value);
      rel = std::max(rel, a.err / a.value + b.err / b.value);
    }
    CheckReport r;
    r.id = "comparison.ordering";
    r.config = detail::config_of(3, p, "g=1.1f+bump") + range;
    r.numerics = num;
    r.mode = "explicit";
    r.lhs = worst;
    r.rhs = 1.0;
    r.slack = rel;
    out.push_back(detail::settle(r));
  }
  return out;
}

// WK_d[f] >= c0 e^{-eps0} WK_d[k^{-alpha} 1_[k1,k2]], c0 and eps0 from the gauges of f on [k1, k2].
inline CheckReport check_lower_bound(Dim d, const Profile& p, double alpha, double k1, double k2,
                                     const VerifyOptions& o = {}, double lambda_lo = 1e-3, double lambda_hi = 1e3) {
  const double c0 = best_fit_constant(p, -alpha, k1, k2);
  const double e0 = gauge_zero(p, -alpha, k1, k2);
  const Profile t = make_truncated_power(alpha, k1, k2);
  double worst = 0.0, rel = 0.0;
  for (double l : log_grid(lambda_lo, lambda_hi, o.sweep_points_per_decade)) {
    const PointResult a = wk_point(d, p, l, o.tol), b = wk_point(d, t, l, o.tol);
    worst = std::max(worst, c0 * std::exp(-e0) * b.value / a.value);
    rel = std::max(rel, a.err / a.value + b.err / b.value);
  }
  CheckReport r;
  r.id = "comparison.lower_bound";
  r.config = detail::config_of(d, p, "alpha=" + detail::fmt(alpha) + " k=[" + detail::fmt(k1) + "," + detail::fmt(k2) +
                                         "] c0=" + detail::fmt(c0) + " eps0=" + detail::fmt(e0));
  r.numerics = "tol=" + detail::fmt(o.tol) + " ppd=" + std::to_string(o.sweep_points_per_decade);
  r.mode = "explicit";
  r.lhs = worst;
  r.rhs = 1.0;
  r.slack = rel;
  return detail::settle(r);
}

// ---------------------------------------------------------------------------
// Kernel tables.

namespace detail {

// Extremum of h over a log grid of [lo, hi], refined by golden section.
inline std::pair<double, double> extremum(const std::function<double(double)>& h, double lo, double hi, int ppd,
                                          bool maximize) {
  const double s = maximize ? 1.0 : -1.0;
  auto g = [&](double u) { return s * h(std::exp(u)); };
  const std::vector<double> xs = log_grid(lo, hi, ppd);
  std::size_t best = 0;
  double bv = -inf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = g(std::log(xs[i]));
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  const double a = std::log(xs[best > 0 ? best - 1 : 0]), b = std::log(xs[std::min(best + 1, xs.size() - 1)]);
  auto [u, v] = golden_max(g, a, b, 60, std::log(xs[best]), bv);
  return {std::exp(u), s * v};
}

}  // namespace detail

inline std::vector<CheckReport> check_kernel_tables() {
  std::vector<CheckReport> out;
  const int ppd = 2000;
  const double lo = 1e-3, hi = 1e3;
  // evaluation rounding of the kernel, relative
  const double round = 64 * std::numeric_limits<double>::epsilon();
  for (int d = 2; d <= 6; ++d) {
    const Dim dim(d);
    const KernelConstants kc = kernel_constants(dim);
    auto ratio = [dim](double s) {
      const double x = pi * pi * s * s;
      return kernel_h(dim, s) * (1 + x) / x;
    };
    const std::string cfg = "d=" + std::to_string(d) + " sigma=[" + detail::fmt(lo) + "," + detail::fmt(hi) + "]";
    const std::string num = "ppd=" + std::to_string(ppd) + " golden=60";
    const auto [smin, vmin] = detail::extremum(ratio, lo, hi, ppd, false);
    const auto [smax, vmax] = detail::extremum(ratio, lo, hi, ppd, true);
    CheckReport a;
    a.id = "kernel.c_minus";
    a.config = cfg;
    a.numerics = num;
    a.mode = "explicit";
    a.lhs = kc.c_minus;
    a.rhs = vmin;
    a.slack = round * vmin;
    a.note = "inf at sigma=" + detail::fmt(smin);
    out.push_back(detail::settle(a));
    CheckReport b = a;
    b.id = "kernel.c_plus";
    b.lhs = vmax;
    b.rhs = kc.c_plus;
    b.slack = round * vmax;
    b.note = "sup at sigma=" + detail::fmt(smax);
    out.push_back(detail::settle(b));

    // |L_d(z)| <= C_L min{z^4, 1} for d >= 3, min{z^4, z^{1/2}} for d = 2
    auto lr = [dim, d](double z) {
      const double m = d >= 3 ? std::min(z * z * z * z, 1.0) : std::min(z * z * z * z, std::sqrt(z));
      return std::abs(kernel_l(dim, z)) / m;
    };
    const auto [zl, vl] = detail::extremum(lr, 1e-4, 1e3, ppd, true);
    CheckReport c;
    c.id = "kernel.c_l";
    c.config = "d=" + std::to_string(d) + " z=[1e-4,1e3]";
    c.numerics = num;
    c.mode = "explicit";
    c.lhs = vl;
    c.rhs = kc.big_c_l;
    c.slack = round * vl;
    c.note = "sup at z=" + detail::fmt(zl);
    out.push_back(detail::settle(c));

    if (d >= 3) {
      // z |H_d'(z)| <= 2 H_d(z)
      auto sr = [dim](double z) { return std::abs(kernel_sigma_hprime(dim, z)) / kernel_h(dim, z); };
      const auto [zs, vs] = detail::extremum(sr, 1e-4, 1e3, ppd, true);
      CheckReport e;
      e.id = "kernel.slope_bound";
      e.config = c.config;
      e.numerics = num;
      e.mode = "explicit";
      e.lhs = vs;
      e.rhs = 2.0;
      e.slack = round * 2;
      e.note = "sup at z=" + detail::fmt(zs);
      out.push_back(detail::settle(e));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Default suite and report output.

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n{"kernel", "thm1", "thm2", "thm3", "thm4", "comparisons"};
  return n;
}

inline std::vector<CheckReport> run_suite(const std::string& name, const VerifyOptions& o = {}) {
  std::vector<CheckReport> out;
  auto add = [&out](std::vector<CheckReport> v) { out.insert(out.end(), v.begin(), v.end()); };
  const Profile two = make_two_regime(2, 4, 10), three = make_three_regime();
  if (name == "kernel") {
    add(check_kernel_tables());
  } else if (name == "thm1") {
    for (int d : {2, 3}) add(check_thm1(Dim(d), make_ode_fluctuation(), 1.5, o));
    add(check_thm1(Dim(3), make_power_law(1.0, -5.0 / 3.0), 5.0 / 3.0, o));
    add(check_thm1(Dim(3), two, 1.5, o));
  } else if (name == "thm2") {
    const double d0 = kernel_constants(Dim(3)).delta0;
    add(check_thm2(Dim(3), two, {d0, d0 / 2, d0 / 4}, o));
    add(check_thm2(Dim(3), make_two_regime(2, 3, 10), {d0}, o));
    add(check_thm2(Dim(3), three, {d0, d0 / 2}, o));
    out.push_back(check_thm2_exponent(Dim(3), make_truncated_power(2, 1, 10), log_grid(1e-4, 1e-2, 2), o));
  } else if (name == "thm3") {
    for (int d : {2, 3}) {
      const double e0 = kernel_constants(Dim(d)).eta0;
      add(check_thm3(Dim(d), two, {e0, 10 * e0, 100 * e0}, o));
    }
  } else if (name == "thm4") {
    out.push_back(check_thm4(Dim(3), three, 1.53, 1.0, 1e4, o));
    out.push_back(check_thm4(Dim(3), make_truncated_power(5.0 / 3.0, 1, 1e4), 5.0 / 3.0, 1.0, 1e4, o));
    const Profile multi = make_multi_regime(1.4, 2.4, 1, 100, 1e4);
    out.push_back(check_plateau(Dim(3), multi, 2.4, 100, 1e4, 0.1, o));
    out.push_back(check_plateau(Dim(3), multi, 1.4, 1, 100, 0.1, o));
  } else if (name == "comparisons") {
    for (const Profile& p : {two, three, make_multi_regime(1.4, 2.4, 1, 100, 1e4), make_truncated_power(5.0 / 3.0, 1, 1e4)})
      add(check_comparisons(p, o));
    out.push_back(check_lower_bound(Dim(3), three, 1.6, 10, 1e3, o));
    for (const Profile& p : {two, three}) {
      const KernelConstants kc = kernel_constants(Dim(3));
      const FlatSharpGap g = flat_sharp_gap(Dim(3), p, kc.delta0, kc.eta0);
      CheckReport r;
      r.id = "comparison.gap";
      r.config = detail::config_of(3, p, "delta=delta0 eta=eta0");
      r.numerics = "rel_tol=1e-6";
      r.mode = "explicit";
      r.lhs = g.k_flat;
      r.rhs = g.k_sharp;
      out.push_back(detail::settle(r));
    }
  } else {
    throw DomainError("unknown suite: " + name);
  }
  return out;
}

// One suite on a caller-supplied profile. alpha feeds thm1/thm4; [k1, k2] is the thm4 spectral interval.
inline std::vector<CheckReport> run_suite(const std::string& name, Dim d, const Profile& p, double alpha, double k1,
                                          double k2, const VerifyOptions& o = {}) {
  std::vector<CheckReport> out;
  auto add = [&out](std::vector<CheckReport> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (name == "kernel") {
    add(check_kernel_tables());
  } else if (name == "thm1") {
    add(check_thm1(d, p, alpha, o));
  } else if (name == "thm2") {
    const double d0 = kernel_constants(d).delta0;
    add(check_thm2(d, p, {d0, d0 / 2, d0 / 4}, o));
    const double hi = p.support().hi;
    if (std::isfinite(hi)) out.push_back(check_thm2_exponent(d, p, log_grid(1e-3 / hi, 1e-1 / hi, 2), o));
  } else if (name == "thm3") {
    const double e0 = kernel_constants(d).eta0;
    add(check_thm3(d, p, {e0, 10 * e0, 100 * e0}, o));
  } else if (name == "thm4") {
    out.push_back(check_thm4(d, p, alpha, k1, k2, o));
  } else if (name == "comparisons") {
    add(check_comparisons(p, o));
    if (d >= 2) {
      const KernelConstants kc = kernel_constants(d);
      try {
        const FlatSharpGap g = flat_sharp_gap(d, p, kc.delta0, kc.eta0);
        CheckReport r;
        r.id = "comparison.gap";
        r.config = detail::config_of(d, p, "delta=delta0 eta=eta0");
        r.numerics = "rel_tol=1e-6";
        r.mode = "explicit";
        r.lhs = g.k_flat;
        r.rhs = g.k_sharp;
        out.push_back(detail::settle(r));
      } catch (const DivergenceError&) {
        out.push_back(detail::not_applicable("comparison.gap", detail::config_of(d, p), "second moment of f diverges"));
      }
    }
  } else {
    throw DomainError("unknown suite: " + name);
  }
  return out;
}

inline std::string reports_csv(const std::vector<CheckReport>& rs) {
  std::ostringstream s;
  s << "check_id,passed,lhs,rhs,margin,slack\n";
  s << std::setprecision(10);
  for (const CheckReport& r : rs) {
    s << r.id << ',' << (r.status == CheckStatus::inapplicable ? "inapplicable" : r.passed ? "true" : "false") << ','
      << r.lhs << ',' << r.rhs << ',' << r.margin << ',' << r.slack << '\n';
  }
  return s.str();
}

inline std::string reports_text(const std::vector<CheckReport>& rs) {
  std::ostringstream s;
  s << std::setprecision(6);
  for (const CheckReport& r : rs) {
    s << '[' << to_string(r.status) << "] " << r.id << "  " << r.config << '\n';
    if (r.status != CheckStatus::inapplicable)
      s << "    lhs=" << r.lhs << " rhs=" << r.rhs << " margin=" << r.margin << " slack=" << r.slack << " mode=" << r.mode
        << '\n';
    if (!r.numerics.empty()) s << "    " << r.numerics << '\n';
    if (!r.note.empty()) s << "    " << r.note << '\n';
  }
  return s.str();
}

// True when no applicable check failed.
inline bool all_passed(const std::vector<CheckReport>& rs) {
  return std::none_of(rs.begin(), rs.end(), [](const CheckReport& r) { return r.status == CheckStatus::fail; });
}

}  // namespace wkt
