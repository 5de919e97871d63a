#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <vector>

#include "wkt/errors.hpp"
#include "wkt/profile.hpp"
#include "wkt/quadrature.hpp"

namespace wkt {

// Anything with a logarithm and a log-log slope on an interval of (0, inf).
template <class C>
concept LogLogCurve = requires(const C& c, double x) {
  { c.log_value(x) } -> std::convertible_to<double>;
  { c.slope(x) } -> std::convertible_to<double>;
  { c.support() } -> std::convertible_to<Interval>;
  { c.scale() } -> std::convertible_to<Interval>;
};

struct GaugeOptions {
  int points_per_decade = 256;
  int refine_iterations = 40;  // golden-section steps per candidate extremum
  int refine_candidates = 6;
  double rel_tol = 1e-7;       // integral gauge
  double window_tol = 1e-6;    // relative increment that stops window growth
  int max_decades = 300;       // per infinite side
  double abs_floor = 0.0;      // per-decade increments below this are evaluation noise
};

struct GaugeValue {
  double value = 0.0;
  bool divergent = false;
  bool extrapolated = false;       // a tail estimate was added past the last decade
  double grid_uncertainty = 0.0;   // refinement gain over the base grid (or quadrature error)
  Interval window{};               // finite window actually evaluated
  bool exact = false;              // closed form on a piecewise power-law interpolant
};

struct ZeroGauge : GaugeValue {
  double g_min = 0.0, g_max = 0.0;  // extremes of log f - alpha log x
  double arg_min = 0.0, arg_max = 0.0;
};

struct GaugeReport {
  double alpha = 0.0;
  Interval interval{};
  double p_zero = 0.0, p_one = 0.0, p_inf = 0.0;
  double c0 = 0.0;
  double witness_lo = 0.0, witness_hi = 0.0;  // where log(f/x^alpha) is smallest / largest
  bool zero_divergent = false, one_divergent = false, inf_divergent = false;
  double grid_uncertainty = 0.0;
  Interval window{};
  bool exact_interpolant = false;
};

namespace detail {

inline constexpr double ln10 = 2.302585092994045684;
inline constexpr double golden = 0.6180339887498948482;

template <class C>
double slope_dev(const C& c, double x, double alpha) {
  if constexpr (requires { c.slope_deviation(x, alpha); })
    return c.slope_deviation(x, alpha);
  else
    return c.slope(x) - alpha;
}

template <class C>
constexpr bool piecewise_power(const C& c) {
  if constexpr (requires { c.is_sampled(); }) return c.is_sampled();
  return false;
}

// Log-space window: finite core plus flags for sides that extend to 0 or inf.
struct LogWindow {
  double u0, u1;
  bool open_lo, open_hi;
  double limit_lo, limit_hi;  // log a, log b (may be infinite)
};

template <class C>
LogWindow make_window(const C& c, double a, double b) {
  if (!(a >= 0 && b > a)) throw DomainError("gauge: need 0 <= a < b");
  const Interval s = c.support();
  if (a < s.lo || b > s.hi) throw DomainError("gauge: interval must lie inside the support");
  LogWindow w{};
  w.open_lo = a == 0.0;
  w.open_hi = std::isinf(b);
  w.limit_lo = w.open_lo ? -inf : std::log(a);
  w.limit_hi = w.open_hi ? inf : std::log(b);
  const Interval sc = c.scale();
  double lo = std::log(sc.lo) - ln10, hi = std::log(sc.hi) + ln10;
  lo = std::max(lo, w.limit_lo);
  hi = std::min(hi, w.limit_hi);
  if (!(hi > lo)) {
    if (w.open_hi) {
      lo = w.limit_lo;
      hi = lo + ln10;
    } else {
      hi = w.limit_hi;
      lo = hi - ln10;
    }
  }
  w.u0 = w.open_lo ? lo : w.limit_lo;
  w.u1 = w.open_hi ? hi : w.limit_hi;
  return w;
}

inline std::vector<double> grid(double u0, double u1, int ppd) {
  const int n = std::max(8, int(std::ceil(ppd * (u1 - u0) / ln10)));
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = u0 + (u1 - u0) * i / n;
  g.back() = u1;
  return g;
}

// Golden-section maximisation of h on [lo, hi]; returns (argmax, max).
template <class H>
std::pair<double, double> golden_max(H&& h, double lo, double hi, int iters, double start_x, double start_v) {
  double bx = start_x, bv = start_v;
  double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
  double f1 = h(x1), f2 = h(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 > bv) bx = x1, bv = f1;
    if (f2 > bv) bx = x2, bv = f2;
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = h(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = h(x2);
    }
  }
  if (f1 > bv) bx = x1, bv = f1;
  if (f2 > bv) bx = x2, bv = f2;
  return {bx, bv};
}

struct GridMax {
  double arg = 0.0, value = -inf, grid_value = -inf;
};

// Sup of h over [u0, u1]: base grid, then golden refinement of the best local maxima.
template <class H>
GridMax grid_max(H&& h, double u0, double u1, const GaugeOptions& o) {
  const std::vector<double> g = grid(u0, u1, o.points_per_decade);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = h(g[i]);
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool left = i == 0 || v[i] >= v[i - 1];
    const bool right = i + 1 == g.size() || v[i] >= v[i + 1];
    if (left && right) cand.push_back(i);
  }
  std::sort(cand.begin(), cand.end(), [&](std::size_t x, std::size_t y) { return v[x] > v[y]; });
  GridMax r;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (v[i] > r.value) r.value = v[i], r.arg = g[i];
  r.grid_value = r.value;
  const int nc = std::min<int>(int(cand.size()), o.refine_candidates);
  for (int c = 0; c < nc && o.refine_iterations > 0; ++c) {
    const std::size_t i = cand[c];
    const double lo = g[i == 0 ? 0 : i - 1], hi = g[std::min(i + 1, g.size() - 1)];
    auto [x, val] = golden_max(h, lo, hi, o.refine_iterations, g[i], v[i]);
    if (val > r.value) r.value = val, r.arg = x;
  }
  return r;
}

// Decay exponent p of decade increments I_j ~ j^{-p}, from I_j and I_{j/2}.
inline double decay_exponent(const std::vector<double>& inc) {
  const std::size_t j = inc.size(), h = (j + 1) / 2;
  if (inc[j - 1] <= 0.0) return inf;
  if (inc[h - 1] <= 0.0) return -inf;
  return std::log(inc[h - 1] / inc[j - 1]) / std::log(double(j) / h);
}

// exp(u) kept inside the support so window edges survive rounding.
template <class C>
double point(const C& c, double u) {
  const Interval s = c.support();
  return std::clamp(std::exp(u), s.lo, s.hi);
}

}  // namespace detail

// Log-log slope x f'(x)/f(x).
template <LogLogCurve C>
double loglog_slope(const C& c, double x) {
  const Interval s = c.support();
  if (!(x > 0 && x >= s.lo && x <= s.hi)) throw DomainError("loglog_slope: point outside the support");
  return c.slope(x);
}

// sup over (a, b) of |x f'/f - alpha|.
template <LogLogCurve C>
GaugeValue gauge_inf_detail(const C& c, double alpha, double a, double b, const GaugeOptions& o = {}) {
  const detail::LogWindow w = detail::make_window(c, a, b);
  GaugeValue r;
  if constexpr (requires { c.segment_slopes(); }) {
    if (detail::piecewise_power(c)) {
      const auto& n = c.nodes();
      const auto& sl = c.segment_slopes();
      double best = 0.0;
      for (std::size_t i = 0; i + 1 < n.size(); ++i)
        if (n[i + 1].first > std::max(a, n.front().first) && n[i].first < std::min(b, n.back().first))
          best = std::max(best, std::abs(sl[i] - alpha));
      r.value = best;
      r.exact = true;
      r.window = {std::max(a, n.front().first), std::min(b, n.back().first)};
      return r;
    }
  }
  auto h = [&](double u) { return std::abs(detail::slope_dev(c, detail::point(c, u), alpha)); };
  detail::GridMax core = detail::grid_max(h, w.u0, w.u1, o);
  double sup = core.value;
  double unc = core.value - core.grid_value;
  double lo = w.u0, hi = w.u1;
  for (int side = 0; side < 2; ++side) {
    const bool open = side == 0 ? w.open_lo : w.open_hi;
    if (!open) continue;
    std::vector<double> locals;
    int growing = 0;
    for (int j = 1;; ++j) {
      if (j > o.max_decades || std::abs(side == 0 ? lo : hi) > 690.0) {
        r.divergent = growing > 0;
        break;
      }
      const double u0 = side == 0 ? lo - detail::ln10 : hi, u1 = side == 0 ? lo : hi + detail::ln10;
      detail::GridMax m = detail::grid_max(h, u0, u1, o);
      unc = std::max(unc, m.value - m.grid_value);
      if (side == 0) lo = u0; else hi = u1;
      if (!std::isfinite(m.value)) {
        r.divergent = true;
        break;
      }
      const double prev = locals.empty() ? sup : locals.back();
      locals.push_back(m.value);
      growing = m.value > prev + o.window_tol * std::max(1.0, sup) ? growing + 1 : 0;
      const bool no_gain = m.value <= sup + o.window_tol * std::max(1e-300, sup) + o.abs_floor;
      sup = std::max(sup, m.value);
      if (growing >= 40) {
        r.divergent = true;
        break;
      }
      if (no_gain && growing == 0 && j >= 2) break;
    }
    if (r.divergent) break;
  }
  r.value = r.divergent ? inf : sup;
  r.grid_uncertainty = unc;
  r.window = {std::exp(lo), std::exp(hi)};
  return r;
}

template <LogLogCurve C>
double gauge_inf(const C& c, double alpha, double a, double b, const GaugeOptions& o = {}) {
  return gauge_inf_detail(c, alpha, a, b, o).value;
}

namespace detail {

// int_{u0}^{u1} |dev(u)| du, split at sign changes of dev and at the given jumps (log coordinates).
template <class H>
QuadResult abs_integral(H&& dev, double u0, double u1, const GaugeOptions& o, double abs_tol,
                        const std::vector<double>& jumps = {}) {
  const int m = std::max(8, o.points_per_decade / 16);
  const std::vector<double> g = grid(u0, u1, m);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = dev(g[i]);
  std::vector<double> cuts{u0};
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if ((v[i] < 0) == (v[i + 1] < 0) || v[i] == 0.0 || v[i + 1] == 0.0) continue;
    double a = g[i], b = g[i + 1], fa = v[i];
    for (int it = 0; it < 60 && b - a > 1e-13 * (1 + std::abs(a)); ++it) {
      const double c = 0.5 * (a + b), fc = dev(c);
      if ((fc < 0) == (fa < 0)) a = c, fa = fc; else b = c;
    }
    cuts.push_back(0.5 * (a + b));
  }
  for (double j : jumps)
    if (j > u0 && j < u1) cuts.push_back(j);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(u1);
  QuadResult total;
  auto absdev = [&](double u) { return std::abs(dev(u)); };
  const double per = abs_tol / double(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadResult r = integrate_adaptive(absdev, cuts[i], cuts[i + 1], per, o.rel_tol, 200);
    total.value += r.value;
    total.error += r.error;
    total.evals += r.evals;
    total.converged = total.converged && r.converged;
  }
  return total;
}

}  // namespace detail

// int_a^b |x f'/f - alpha| dx/x; +inf with the divergence flag when the tails do not converge.
template <LogLogCurve C>
GaugeValue gauge_one_detail(const C& c, double alpha, double a, double b, const GaugeOptions& o = {}) {
  const detail::LogWindow w = detail::make_window(c, a, b);
  GaugeValue r;
  if constexpr (requires { c.segment_slopes(); }) {
    if (detail::piecewise_power(c)) {
      const auto& n = c.nodes();
      const auto& sl = c.segment_slopes();
      double total = 0.0;
      for (std::size_t i = 0; i + 1 < n.size(); ++i) {
        const double u = std::max(a, n[i].first), v = std::min(b, n[i + 1].first);
        if (v > u) total += std::abs(sl[i] - alpha) * std::log(v / u);
      }
      r.value = total;
      r.exact = true;
      r.window = {std::max(a, n.front().first), std::min(b, n.back().first)};
      return r;
    }
  }
  auto dev = [&](double u) { return detail::slope_dev(c, detail::point(c, u), alpha); };
  // slope jumps would otherwise sit inside a quadrature panel and fool its error estimate
  std::vector<double> jumps;
  if constexpr (requires { c.breakpoints(); })
    for (double k : c.breakpoints())
      if (k > 0 && std::isfinite(k)) jumps.push_back(std::log(k));
  // core, one decade at a time so the absolute tolerance follows the running value
  double total = 0.0, err = 0.0;
  for (double u = w.u0; u < w.u1;) {
    const double v = std::min(w.u1, u + detail::ln10);
    QuadResult q = detail::abs_integral(dev, u, v, o, std::max(1e-15, 0.1 * o.abs_floor), jumps);
    total += q.value;
    err += q.error;
    u = v;
  }
  double lo = w.u0, hi = w.u1;
  for (int side = 0; side < 2 && !r.divergent; ++side) {
    const bool open = side == 0 ? w.open_lo : w.open_hi;
    if (!open) continue;
    std::vector<double> inc;
    for (int j = 1;; ++j) {
      const double u0 = side == 0 ? lo - detail::ln10 : hi, u1 = side == 0 ? lo : hi + detail::ln10;
      QuadResult q = detail::abs_integral(dev, u0, u1, o, std::max(o.rel_tol * total, 0.1 * o.abs_floor), jumps);
      if (side == 0) lo = u0; else hi = u1;
      if (!std::isfinite(q.value)) {
        r.divergent = true;
        break;
      }
      total += q.value;
      err += q.error;
      inc.push_back(q.value);
      if (q.value <= o.window_tol * total + o.abs_floor || q.value < 1e-300) break;
      if (inc.size() >= 16) {
        const double p = detail::decay_exponent(inc);
        if (p < 1.1) {
          r.divergent = true;
          break;
        }
        if (j >= o.max_decades || std::abs(side == 0 ? lo : hi) > 690.0) {
          const double n = double(inc.size());
          const double tail = std::isfinite(p) ? q.value * n / (p - 1.0) : 0.0;
          total += tail;
          err += tail;
          r.extrapolated = true;
          break;
        }
      }
      if (std::abs(side == 0 ? lo : hi) > 690.0) break;
    }
  }
  r.value = r.divergent ? inf : total;
  r.grid_uncertainty = err;
  r.window = {std::exp(lo), std::exp(hi)};
  return r;
}

template <LogLogCurve C>
double gauge_one(const C& c, double alpha, double a, double b, const GaugeOptions& o = {}) {
  return gauge_one_detail(c, alpha, a, b, o).value;
}

// max - min of log f(x) - alpha log x over the closure of (a, b), with witnesses.
template <LogLogCurve C>
ZeroGauge gauge_zero_detail(const C& c, double alpha, double a, double b, const GaugeOptions& o = {}) {
  const detail::LogWindow w = detail::make_window(c, a, b);
  ZeroGauge r;
  auto g = [&](double u) { return c.log_value(detail::point(c, u)) - alpha * u; };
  if constexpr (requires { c.segment_slopes(); }) {
    if (detail::piecewise_power(c)) {
      const auto& n = c.nodes();
      const double lo = std::max(a, n.front().first), hi = std::min(b, n.back().first);
      std::vector<double> pts{lo, hi};
      for (const auto& row : n)
        if (row.first > lo && row.first < hi) pts.push_back(row.first);
      r.g_min = inf;
      r.g_max = -inf;
      for (double x : pts) {
        const double v = c.log_value(x) - alpha * std::log(x);
        if (v < r.g_min) r.g_min = v, r.arg_min = x;
        if (v > r.g_max) r.g_max = v, r.arg_max = x;
      }
      r.value = r.g_max - r.g_min;
      r.exact = true;
      r.window = {lo, hi};
      return r;
    }
  }
  auto neg = [&](double u) { return -g(u); };
  auto scan = [&](double u0, double u1, double& unc) {
    detail::GridMax mx = detail::grid_max(g, u0, u1, o), mn = detail::grid_max(neg, u0, u1, o);
    unc = (mx.value - mx.grid_value) + (mn.value - mn.grid_value);
    return std::pair{mx, mn};
  };
  double unc = 0.0;
  auto [mx, mn] = scan(w.u0, w.u1, unc);
  r.g_max = mx.value;
  r.arg_max = mx.arg;
  r.g_min = -mn.value;
  r.arg_min = mn.arg;
  double lo = w.u0, hi = w.u1;
  for (int side = 0; side < 2 && !r.divergent; ++side) {
    const bool open = side == 0 ? w.open_lo : w.open_hi;
    if (!open) continue;
    std::vector<double> inc;
    for (int j = 1;; ++j) {
      const double u0 = side == 0 ? lo - detail::ln10 : hi, u1 = side == 0 ? lo : hi + detail::ln10;
      double du = 0.0;
      auto [dmx, dmn] = scan(u0, u1, du);
      unc = std::max(unc, du);
      if (side == 0) lo = u0; else hi = u1;
      if (!std::isfinite(dmx.value) || !std::isfinite(dmn.value)) {
        r.divergent = true;
        break;
      }
      const double span = dmx.value + dmn.value;  // range of g over the new decade
      if (dmx.value > r.g_max) r.g_max = dmx.value, r.arg_max = dmx.arg;
      if (-dmn.value < r.g_min) r.g_min = -dmn.value, r.arg_min = dmn.arg;
      inc.push_back(span);
      const double scale = std::max(r.g_max - r.g_min, 1e-300);
      if (span <= o.window_tol * scale + o.abs_floor || span < 1e-300) break;
      if (inc.size() >= 16) {
        const double p = detail::decay_exponent(inc);
        if (p < 1.1) {
          r.divergent = true;
          break;
        }
        if (j >= o.max_decades || std::abs(side == 0 ? lo : hi) > 690.0) {
          // g keeps drifting in the direction of its last decade
          const double n = double(inc.size());
          const double tail = std::isfinite(p) ? span * n / (p - 1.0) : 0.0;
          const double edge = g(side == 0 ? lo : hi), inner = g(side == 0 ? lo + detail::ln10 : hi - detail::ln10);
          if (edge >= inner) r.g_max = std::max(r.g_max, edge + tail); else r.g_min = std::min(r.g_min, edge - tail);
          r.extrapolated = true;
          break;
        }
      }
      if (std::abs(side == 0 ? lo : hi) > 690.0) break;
    }
  }
  r.value = r.divergent ? inf : r.g_max - r.g_min;
  r.arg_max = std::exp(r.arg_max);
  r.arg_min = std::exp(r.arg_min);
  r.grid_uncertainty = unc;
  r.window = {std::exp(lo), std::exp(hi)};
  return r;
}

template <LogLogCurve C>
double gauge_zero(const C& c, double alpha, double a, double b, const GaugeOptions& o = {}) {
  return gauge_zero_detail(c, alpha, a, b, o).value;
}

// c0 = exp((M + m)/2) with M, m the extremes of log(f/x^alpha) on [a, b].
template <LogLogCurve C>
double best_fit_constant(const C& c, double alpha, double a, double b, const GaugeOptions& o = {}) {
  if (!(a > 0 && std::isfinite(b) && b > a)) throw DomainError("best_fit_constant: need 0 < a < b < inf");
  const ZeroGauge z = gauge_zero_detail(c, alpha, a, b, o);
  return std::exp(0.5 * (z.g_max + z.g_min));
}

template <LogLogCurve C>
GaugeReport gauge_report(const C& c, double alpha, double a, double b, const GaugeOptions& o = {}) {
  GaugeReport rep;
  rep.alpha = alpha;
  rep.interval = {a, b};
  const ZeroGauge z = gauge_zero_detail(c, alpha, a, b, o);
  const GaugeValue one = gauge_one_detail(c, alpha, a, b, o);
  const GaugeValue sup = gauge_inf_detail(c, alpha, a, b, o);
  rep.p_zero = z.value;
  rep.p_one = one.value;
  rep.p_inf = sup.value;
  rep.zero_divergent = z.divergent;
  rep.one_divergent = one.divergent;
  rep.inf_divergent = sup.divergent;
  rep.witness_lo = z.arg_min;
  rep.witness_hi = z.arg_max;
  rep.c0 = z.divergent ? std::numeric_limits<double>::quiet_NaN() : std::exp(0.5 * (z.g_max + z.g_min));
  rep.grid_uncertainty = std::max({z.grid_uncertainty, one.grid_uncertainty, sup.grid_uncertainty});
  rep.window = {std::min({z.window.lo, one.window.lo, sup.window.lo}),
                std::max({z.window.hi, one.window.hi, sup.window.hi})};
  rep.exact_interpolant = z.exact && one.exact && sup.exact;
  return rep;
}

}  // namespace wkt
