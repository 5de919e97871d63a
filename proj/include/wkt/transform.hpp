#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "wkt/errors.hpp"
#include "wkt/kernel.hpp"
#include "wkt/profile.hpp"
#include "wkt/quadrature.hpp"
#include "wkt/special.hpp"

namespace wkt {

// A kernel K(s) that equals plateau + a(s) cos(2 pi s) + b(s) sin(2 pi s) for
// s >= sigma_a, with slowly varying amplitudes (a, b).
struct OscKernel {
  std::function<double(double)> value;
  std::function<std::pair<double, double>(double)> amplitudes;
  double plateau = 0.0;
  double sigma_a = 16.0;
};

inline OscKernel wk_kernel(Dim d) {
  return {[d](double s) { return kernel_h(d, s); }, [d](double s) { return kernel_h_amplitudes(d, s); }, 1.0,
          oscillation_threshold(d)};
}

// s H_d'(s): lambda WK' = int s H_d'(lambda k) f(k) dk.
inline OscKernel slope_kernel(Dim d) {
  return {[d](double s) { return kernel_sigma_hprime(d, s); },
          [d](double s) { return kernel_sigma_hprime_amplitudes(d, s); }, 0.0, oscillation_threshold(d)};
}

// s H_d' - a H_d, whose transform is (slope - a) WK without cancellation.
inline OscKernel offset_kernel(Dim d, double a) {
  std::function<double(double)> v;
  if (a == 2.0)
    v = [d](double s) { return -kernel_l(d, s); };
  else
    v = [d, a](double s) { return kernel_sigma_hprime(d, s) - a * kernel_h(d, s); };
  return {std::move(v),
          [d, a](double s) {
            auto [p, q] = kernel_sigma_hprime_amplitudes(d, s);
            auto [h, g] = kernel_h_amplitudes(d, s);
            return std::pair{p - a * h, q - a * g};
          },
          -a, oscillation_threshold(d)};
}

// 1 - H_d: the Hankel-type side int f - WK_d[f].
inline OscKernel hankel_kernel(Dim d) {
  return {[d](double s) { return 1.0 - kernel_h(d, s); },
          [d](double s) {
            auto [a, b] = kernel_h_amplitudes(d, s);
            return std::pair{-a, -b};
          },
          0.0, oscillation_threshold(d)};
}

// cos(2 pi s) or sin(2 pi s).
inline OscKernel fourier_kernel(bool sine) {
  if (sine)
    return {[](double s) { return std::sin(2.0 * pi * (s - std::floor(s))); },
            [](double) { return std::pair{0.0, 1.0}; }, 0.0, 1.0};
  return {[](double s) { return std::cos(2.0 * pi * (s - std::floor(s))); },
          [](double) { return std::pair{1.0, 0.0}; }, 0.0, 1.0};
}

// s J_1(2 pi s).
inline OscKernel bessel_j1_kernel() {
  return {[](double s) { return s * bessel_j(1.0, 2.0 * pi * s); },
          [](double s) { return bessel_amplitudes(2, 1.0, 1.0, 1.0 / pi, s); }, 0.0, 16.0};
}

struct PointResult {
  double value = 0.0;
  double err = 0.0;
  int evals = 0;
};

namespace detail {

inline void check_point_args(double lambda, double tol) {
  if (!(lambda > 0 && std::isfinite(lambda))) throw DomainError("transform: lambda must be positive and finite");
  if (!(tol >= 1e-10 && tol < 1)) throw DomainError("transform: tolerance must lie in [1e-10, 1)");
}

// int_0^{sigma_a/lambda} K(lambda k) f(k) dk: geometric panels from the top down,
// each split at half periods and breakpoints.
inline PointResult near_region(const OscKernel& K, const Profile& p, double lambda, double tol, double abs_scale,
                               double top) {
  PointResult r;
  const Interval s = p.support();
  auto F = [&](double k) { return K.value(lambda * k) * p(k); };
  std::vector<double> contrib;
  int below = 0;
  double v = top;
  while (v > s.lo) {
    const double u = std::max(s.lo, 0.5 * v);
    std::vector<double> cuts{u, v};
    for (double j = std::ceil(2.0 * lambda * u); j / (2.0 * lambda) < v; j += 1.0)
      if (j / (2.0 * lambda) > u) cuts.push_back(j / (2.0 * lambda));
    for (double bp : p.breakpoints())
      if (bp > u && bp < v) cuts.push_back(bp);
    std::sort(cuts.begin(), cuts.end());
    double panel = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!(cuts[i + 1] > cuts[i])) continue;
      const double scale = std::max({std::abs(r.value + panel), abs_scale, 1e-300});
      QuadResult q = integrate_adaptive(F, cuts[i], cuts[i + 1], 1e-2 * tol * scale, 0.1 * tol);
      panel += q.value;
      r.err += q.error;
      r.evals += q.evals;
    }
    r.value += panel;
    v = u;
    if (s.lo > 0) continue;
    // open at the origin: stop once the panels decay geometrically
    contrib.push_back(std::abs(panel));
    if (u < 0.5 * p.scale().lo) ++below;
    const std::size_t n = contrib.size();
    if (below >= 2 && n >= 3) {
      const double c = contrib[n - 1];
      const double scale = std::max({std::abs(r.value), abs_scale, 1e-300});
      if (c == 0.0 || c < 1e-300 * scale) break;
      const double r1 = c / contrib[n - 2], r2 = contrib[n - 2] / contrib[n - 3];
      if (r1 < 0.9 && r2 < 0.9) {
        const double rest = c * r1 / (1.0 - r1);
        if (rest < 1e-2 * tol * scale) {
          r.value += panel >= 0 ? rest : -rest;
          r.err += rest;
          break;
        }
      }
      if (below > 200 && r1 >= 0.97) throw DivergenceError("transform: integrand not integrable at the origin");
    }
    if (v < 1e-300) break;
  }
  return r;
}

// int over sigma in [s0, s1] of g(s) e^{2 pi i s}, real part; Levin panels with bisection.
template <class G, class Real>
PointResult levin_span(G&& g, Real&& real_part, double s0, double s1, double target) {
  PointResult r;
  std::vector<std::pair<double, double>> stack{{s0, s1}};
  while (!stack.empty()) {
    auto [u, v] = stack.back();
    stack.pop_back();
    if (v - u < 0.5) {
      QuadResult q = integrate_adaptive(real_part, u, v, 0.1 * target, 1e-14);
      r.value += q.value;
      r.err += q.error;
      r.evals += q.evals;
      continue;
    }
    const double c = 0.5 * (u + v), h = 0.5 * (v - u);
    LevinResult L = levin_unit([&](double t) { return g(c + h * t); }, 2.0 * pi * h);
    r.evals += L.evals;
    if (!(h * L.error <= target) || !L.converged) {
      stack.push_back({u, c});
      stack.push_back({c, v});
      continue;
    }
    const double ph = 2.0 * pi * (c - std::floor(c));
    r.value += (h * std::complex<double>(std::cos(ph), std::sin(ph)) * L.value).real();
    r.err += h * L.error;
  }
  return r;
}

}  // namespace detail

// int_0^inf K(lambda k) f(k) dk with an absolute error estimate. The error target is
// tol * max(|value|, abs_scale).
inline PointResult integrate_kernel(const OscKernel& K, const Profile& p, double lambda, double tol,
                                    double abs_scale = 0.0) {
  detail::check_point_args(lambda, tol);
  const Interval s = p.support();
  const double kA = K.sigma_a / lambda;
  PointResult r;

  // plateau of the far region
  if (K.plateau != 0.0 && s.hi > kA) {
    const double m = moment(p, 0, std::max(kA, s.lo), s.hi, 0.1 * tol);
    r.value += K.plateau * m;
    r.err += 0.1 * tol * std::abs(K.plateau * m);
  }

  const double top = std::min(s.hi, kA);
  if (top > s.lo) {
    PointResult a = detail::near_region(K, p, lambda, tol, std::max(abs_scale, std::abs(r.value)), top);
    r.value += a.value;
    r.err += a.err;
    r.evals += a.evals;
  }

  // oscillatory part of the far region, in the variable sigma = lambda k
  const double sB = std::max(K.sigma_a, lambda * s.lo), sEnd = lambda * s.hi;
  if (sB < sEnd) {
    auto kk = [&](double sg) { return std::clamp(sg / lambda, s.lo, s.hi); };
    auto g = [&](double sg) {
      auto [a, b] = K.amplitudes(sg);
      const double fv = p(kk(sg)) / lambda;
      return std::complex<double>(fv * a, -fv * b);
    };
    auto real_part = [&](double sg) {
      auto [a, b] = K.amplitudes(sg);
      const double ph = 2.0 * pi * (sg - std::floor(sg));
      return p(kk(sg)) / lambda * (a * std::cos(ph) + b * std::sin(ph));
    };
    std::vector<double> bps;
    for (double bp : p.breakpoints())
      if (lambda * bp > sB && lambda * bp < sEnd) bps.push_back(lambda * bp);
    std::size_t next_bp = 0;
    double prev_tail = inf;
    for (double u = sB; u < sEnd;) {
      double v = std::min(sEnd, std::max(u + 8.0, 2.0 * u));
      while (next_bp < bps.size() && bps[next_bp] <= u) ++next_bp;
      if (next_bp < bps.size() && bps[next_bp] < v) v = bps[next_bp];
      const double scale = std::max({std::abs(r.value), abs_scale, 1e-300});
      PointResult q = detail::levin_span(g, real_part, u, v, 1e-2 * tol * scale);
      r.value += q.value;
      r.err += q.err;
      r.evals += q.evals;
      u = v;
      if (std::isfinite(sEnd) && u >= sEnd) break;
      if (next_bp < bps.size()) continue;
      // remaining tail ~ |g(u)| / (2 pi) once g is decreasing
      const double tail = std::abs(g(u)) / (2.0 * pi);
      if (tail < 0.1 * tol * std::max({std::abs(r.value), abs_scale, 1e-300}) && tail <= prev_tail) {
        r.err += tail;
        break;
      }
      prev_tail = tail;
      if (u / lambda > 1e200) throw DivergenceError("transform: oscillatory tail does not settle");
    }
  }
  if (!std::isfinite(r.value)) throw ToleranceError("transform: non-finite quadrature result");
  return r;
}

// WK_d[f](lambda) = int_0^inf H_d(lambda k) f(k) dk.
inline PointResult wk_point(Dim d, const Profile& p, double lambda, double tol = 1e-8) {
  return integrate_kernel(wk_kernel(d), p, lambda, tol);
}

struct SlopeResult {
  double slope = 0.0;
  double err = 0.0;
  double value = 0.0;  // WK_d[f](lambda)
  double value_err = 0.0;
};

// lambda WK'/WK via the s H_d' kernel; needs no derivative of f.
inline SlopeResult wk_slope_detail(Dim d, const Profile& p, double lambda, double tol = 1e-8) {
  const PointResult w = wk_point(d, p, lambda, tol);
  const PointResult s = integrate_kernel(slope_kernel(d), p, lambda, tol, w.value);
  return {s.value / w.value, (s.err + std::abs(s.value) * w.err / w.value) / w.value, w.value, w.err};
}

inline double wk_slope(Dim d, const Profile& p, double lambda, double tol = 1e-8) {
  return wk_slope_detail(d, p, lambda, tol).slope;
}

// slope - a, integrated directly so it stays accurate when slope is close to a.
inline SlopeResult wk_slope_offset(Dim d, const Profile& p, double lambda, double a, double tol = 1e-8) {
  const PointResult w = wk_point(d, p, lambda, tol);
  const PointResult s = integrate_kernel(offset_kernel(d, a), p, lambda, tol, w.value);
  return {s.value / w.value, (s.err + std::abs(s.value) * w.err / w.value) / w.value, w.value, w.err};
}

// int_0^inf f - WK_d[f](lambda), with error measured against int f.
inline double hankel_side(Dim d, const Profile& p, double lambda, double tol = 1e-8) {
  const double total = moment(p, 0, 0.0, inf, 0.1 * tol);
  return integrate_kernel(hankel_kernel(d), p, lambda, tol, total).value;
}

struct TransformCurve {
  std::vector<double> lambda_grid;
  std::vector<double> values;
  std::vector<double> slopes;
  std::vector<double> err_est;
};

inline std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
  if (!(lo > 0 && hi > lo && std::isfinite(hi))) throw DomainError("grid: need 0 < lo < hi < inf");
  if (points_per_decade < 1) throw DomainError("grid: points per decade must be positive");
  const int n = std::max(1, int(std::ceil(points_per_decade * std::log10(hi / lo) - 1e-9)));
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / n);
  g.back() = hi;
  return g;
}

inline TransformCurve wk_curve(Dim d, const Profile& p, double lambda_min, double lambda_max, int points_per_decade,
                               double tol = 1e-8) {
  if (points_per_decade < 4) throw DomainError("wk_curve: points per decade must be at least 4");
  TransformCurve c;
  c.lambda_grid = log_grid(lambda_min, lambda_max, points_per_decade);
  for (double l : c.lambda_grid) {
    const SlopeResult s = wk_slope_detail(d, p, l, tol);
    c.values.push_back(s.value);
    c.slopes.push_back(s.slope);
    c.err_est.push_back(s.value_err);
  }
  return c;
}

// WK_d[f] as a log-log curve in lambda, for the gauges. Transform values are cached
// per lambda; copies share the cache.
class WkView {
 public:
  WkView(Dim d, Profile p, double tol = 1e-8) : d_(d), p_(std::move(p)), tol_(tol), cache_(std::make_shared<Cache>()) {}

  double log_value(double lambda) const { return std::log(value(lambda)); }
  double slope(double lambda) const { return slope_deviation(lambda, 0.0); }
  double slope_deviation(double lambda, double a) const {
    const double w = value(lambda);
    return integrate_kernel(a == 0.0 ? slope_kernel(d_) : offset_kernel(d_, a), p_, lambda, tol_, w).value / w;
  }
  Interval support() const { return {0.0, inf}; }
  Interval scale() const {
    const Interval s = p_.scale();
    return {0.1 / s.hi, 10.0 / s.lo};
  }
  Dim dim() const { return d_; }
  const Profile& profile() const { return p_; }
  double tol() const { return tol_; }

  double value(double lambda) const {
    {
      std::lock_guard lock(cache_->m);
      auto it = cache_->values.find(lambda);
      if (it != cache_->values.end()) return it->second;
    }
    const double v = wk_point(d_, p_, lambda, tol_).value;
    std::lock_guard lock(cache_->m);
    cache_->values.emplace(lambda, v);
    return v;
  }

 private:
  struct Cache {
    std::mutex m;
    std::map<double, double> values;
  };
  Dim d_;
  Profile p_;
  double tol_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace wkt
