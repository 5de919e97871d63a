#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wkt/errors.hpp"
#include "wkt/quadrature.hpp"

namespace wkt {

inline constexpr double inf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0;
  double hi = inf;
};

// A positive function on (0, inf), zero outside its support.
class Profile {
 public:
  // Description of an analytic profile; value is required, the others are
  // derived from it when empty (log_value = log(value)).
  struct Analytic {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> log_value;
    std::function<double(double)> slope;  // k f'(k) / f(k)
    Interval support{0.0, inf};
    std::vector<double> breakpoints;
    Interval scale{1.0, 1.0};  // range holding the features of f
  };

  explicit Profile(Analytic a) {
    if (!a.value) throw DomainError("profile: value function required");
    if (!(a.support.lo >= 0 && a.support.hi > a.support.lo)) throw DomainError("profile: empty support");
    if (!a.slope) throw DomainError("profile: slope function required");
    if (!a.log_value) {
      auto v = a.value;
      a.log_value = [v](double k) { return std::log(v(k)); };
    }
    auto impl = std::make_shared<Impl>();
    impl->name = std::move(a.name);
    impl->value = std::move(a.value);
    impl->log_value = std::move(a.log_value);
    impl->slope = std::move(a.slope);
    impl->support = a.support;
    impl->scale = a.scale;
    std::sort(a.breakpoints.begin(), a.breakpoints.end());
    for (double b : a.breakpoints)
      if (b > a.support.lo && b < a.support.hi) impl->breakpoints.push_back(b);
    impl_ = std::move(impl);
  }

  // Log-log linear interpolant through (k_i, f_i).
  static Profile sampled(const std::vector<std::pair<double, double>>& rows, std::string name = "sampled") {
    if (rows.size() < 8) throw FormatError("sampled profile needs at least 8 rows", rows.size());
    auto impl = std::make_shared<Impl>();
    impl->name = std::move(name);
    impl->is_sampled = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto [k, f] = rows[i];
      if (!(std::isfinite(k) && k > 0)) throw FormatError("abscissa must be positive and finite", i + 1);
      if (!(std::isfinite(f) && f > 0)) throw FormatError("profile value must be positive", i + 1);
      if (i > 0 && !(k > rows[i - 1].first)) throw FormatError("abscissae must be strictly increasing", i + 1);
    }
    impl->nodes = rows;
    for (const auto& [k, f] : rows) {
      impl->lk.push_back(std::log(k));
      impl->lf.push_back(std::log(f));
    }
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
      impl->seg_slope.push_back((impl->lf[i + 1] - impl->lf[i]) / (impl->lk[i + 1] - impl->lk[i]));
    impl->support = {rows.front().first, rows.back().first};
    impl->scale = impl->support;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) impl->breakpoints.push_back(rows[i].first);
    return Profile(std::move(impl));
  }

  const std::string& name() const noexcept { return impl_->name; }
  bool is_sampled() const noexcept { return impl_->is_sampled; }
  Interval support() const noexcept { return impl_->support; }
  Interval scale() const noexcept { return impl_->scale; }
  const std::vector<double>& breakpoints() const noexcept { return impl_->breakpoints; }
  const std::vector<std::pair<double, double>>& nodes() const noexcept { return impl_->nodes; }
  const std::vector<double>& segment_slopes() const noexcept { return impl_->seg_slope; }

  bool in_support(double k) const noexcept { return k >= impl_->support.lo && k <= impl_->support.hi && k > 0; }

  double operator()(double k) const {
    if (!in_support(k)) return 0.0;
    if (impl_->is_sampled) return sampled_value(k);
    return impl_->value(k);
  }

  // log f(k); -inf outside the support.
  double log_value(double k) const {
    if (!in_support(k)) return -inf;
    if (impl_->is_sampled) {
      const std::size_t i = segment(k);
      return impl_->lf[i] + impl_->seg_slope[i] * (std::log(k) - impl_->lk[i]);
    }
    return impl_->log_value(k);
  }

  // Log-log slope k f'(k)/f(k); the segment slope for sampled profiles
  // (right segment at interior nodes).
  double slope(double k) const {
    if (!in_support(k)) throw DomainError("slope: point outside the support");
    if (impl_->is_sampled) return impl_->seg_slope[segment(k)];
    return impl_->slope(k);
  }

  double derivative(double k) const {
    if (!in_support(k)) return 0.0;
    return (*this)(k) * slope(k) / k;
  }

  // r f
  Profile scaled(double r) const {
    if (!(r > 0)) throw DomainError("scaled: factor must be positive");
    if (is_sampled()) {
      auto rows = nodes();
      for (auto& row : rows) row.second *= r;
      return sampled(rows, name());
    }
    const Profile self = *this;
    const double lr = std::log(r);
    return Profile(Analytic{name() + "*" + fmt(r), [self, r](double k) { return r * self(k); },
                            [self, lr](double k) { return lr + self.log_value(k); },
                            [self](double k) { return self.slope(k); }, support(), breakpoints(), scale()});
  }

  // k -> f(s k)
  Profile dilated(double s) const {
    if (!(s > 0)) throw DomainError("dilated: factor must be positive");
    if (is_sampled()) {
      auto rows = nodes();
      for (auto& row : rows) row.first /= s;
      return sampled(rows, name());
    }
    const Profile self = *this;
    std::vector<double> bp;
    for (double b : breakpoints()) bp.push_back(b / s);
    return Profile(Analytic{name() + "(" + fmt(s) + "k)", [self, s](double k) { return self(s * k); },
                            [self, s](double k) { return self.log_value(s * k); },
                            [self, s](double k) { return self.slope(s * k); },
                            {support().lo / s, support().hi / s}, bp, {scale().lo / s, scale().hi / s}});
  }

  // k^beta f
  Profile times_power(double beta) const {
    const Profile self = *this;
    return Profile(Analytic{name() + "*k^" + fmt(beta), [self, beta](double k) { return std::pow(k, beta) * self(k); },
                            [self, beta](double k) { return beta * std::log(k) + self.log_value(k); },
                            [self, beta](double k) { return beta + self.slope(k); }, support(), breakpoints(),
                            scale()});
  }

  friend Profile operator+(const Profile& f, const Profile& g) {
    Interval s{std::min(f.support().lo, g.support().lo), std::max(f.support().hi, g.support().hi)};
    std::vector<double> bp = f.breakpoints();
    bp.insert(bp.end(), g.breakpoints().begin(), g.breakpoints().end());
    for (double e : {f.support().lo, f.support().hi, g.support().lo, g.support().hi})
      if (std::isfinite(e)) bp.push_back(e);
    auto lse = [f, g](double k) {
      const double a = f.log_value(k), b = g.log_value(k);
      const double m = std::max(a, b);
      if (m == -inf) return -inf;
      return m + std::log1p(std::exp(std::min(a, b) - m));
    };
    return Profile(Analytic{"(" + f.name() + "+" + g.name() + ")", [f, g](double k) { return f(k) + g(k); }, lse,
                            [f, g](double k) {
                              const bool fi = f.in_support(k), gi = g.in_support(k);
                              if (!gi) return f.slope(k);
                              if (!fi) return g.slope(k);
                              const double a = f.log_value(k), b = g.log_value(k);
                              const double w = 1.0 / (1.0 + std::exp(b - a));  // f/(f+g)
                              return w * f.slope(k) + (1.0 - w) * g.slope(k);
                            },
                            s, bp,
                            {std::min(f.scale().lo, g.scale().lo), std::max(f.scale().hi, g.scale().hi)}});
  }

  friend Profile operator*(const Profile& f, const Profile& g) {
    Interval s{std::max(f.support().lo, g.support().lo), std::min(f.support().hi, g.support().hi)};
    if (!(s.hi > s.lo)) throw DomainError("product: supports do not overlap");
    std::vector<double> bp = f.breakpoints();
    bp.insert(bp.end(), g.breakpoints().begin(), g.breakpoints().end());
    return Profile(Analytic{"(" + f.name() + "*" + g.name() + ")", [f, g](double k) { return f(k) * g(k); },
                            [f, g](double k) { return f.log_value(k) + g.log_value(k); },
                            [f, g](double k) { return f.slope(k) + g.slope(k); }, s, bp,
                            {std::min(f.scale().lo, g.scale().lo), std::max(f.scale().hi, g.scale().hi)}});
  }

 private:
  struct Impl {
    std::string name;
    bool is_sampled = false;
    std::function<double(double)> value, log_value, slope;
    Interval support, scale;
    std::vector<double> breakpoints;
    std::vector<std::pair<double, double>> nodes;
    std::vector<double> lk, lf, seg_slope;
  };

  explicit Profile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  static std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
  }

  std::size_t segment(double k) const {
    const auto& n = impl_->nodes;
    auto it = std::upper_bound(n.begin(), n.end(), k, [](double v, const auto& row) { return v < row.first; });
    std::size_t i = std::size_t(it - n.begin());
    i = i == 0 ? 0 : i - 1;
    return std::min(i, n.size() - 2);
  }

  double sampled_value(double k) const {
    const std::size_t i = segment(k);
    if (k == impl_->nodes[i].first) return impl_->nodes[i].second;
    if (k == impl_->nodes[i + 1].first) return impl_->nodes[i + 1].second;
    return std::exp(impl_->lf[i] + impl_->seg_slope[i] * (std::log(k) - impl_->lk[i]));
  }

  std::shared_ptr<const Impl> impl_;
};

// ---------------------------------------------------------------------------
// Families

// c k^exponent on (0, inf).
inline Profile make_power_law(double c, double exponent) {
  if (!(c > 0)) throw DomainError("power law: prefactor must be positive");
  const double lc = std::log(c);
  return Profile(Profile::Analytic{"power", [c, exponent](double k) { return c * std::pow(k, exponent); },
                                   [lc, exponent](double k) { return lc + exponent * std::log(k); },
                                   [exponent](double) { return exponent; }, {0.0, inf}, {}, {1.0, 1.0}});
}

// k^{-alpha} on [k1, k2], zero elsewhere.
inline Profile make_truncated_power(double alpha, double k1, double k2) {
  if (!(k1 > 0 && k2 > k1 && std::isfinite(k2))) throw DomainError("truncated power: need 0 < k1 < k2 < inf");
  return Profile(Profile::Analytic{"truncated", [alpha](double k) { return std::pow(k, -alpha); },
                                   [alpha](double k) { return -alpha * std::log(k); },
                                   [alpha](double) { return -alpha; }, {k1, k2}, {}, {k1, k2}});
}

// k^alpha / (k0^{alpha+beta} + k^{alpha+beta}).
inline Profile make_two_regime(double alpha, double beta, double k0) {
  if (!(alpha > -1.0)) throw DomainError("two regime: alpha must exceed -1");
  if (!(beta >= 3.0)) throw DomainError("two regime: beta must be >= 3");
  if (!(k0 > 0)) throw DomainError("two regime: k0 must be positive");
  const double s = alpha + beta, l0 = std::log(k0);
  auto logv = [alpha, s, l0](double k) {
    const double lk = std::log(k), m = std::max(lk, l0);
    return alpha * lk - s * m - std::log1p(std::exp(-s * std::abs(lk - l0)));
  };
  return Profile(Profile::Analytic{"two-regime", [logv](double k) { return std::exp(logv(k)); }, logv,
                                   [alpha, s, l0](double k) {
                                     // alpha - s r/(1+r), r = (k/k0)^s
                                     const double e = s * (std::log(k) - l0);
                                     const double w = e > 0 ? 1.0 / (1.0 + std::exp(-e)) : std::exp(e) / (1.0 + std::exp(e));
                                     return alpha - s * w;
                                   },
                                   {0.0, inf}, {}, {k0 / 10.0, k0 * 10.0}});
}

// k^2 exp(-1e-4 k) / ((1 + k^3) ln^2(2 + k)).
inline Profile make_three_regime() {
  auto logv = [](double k) {
    const double lk = std::log(k);
    const double l1k3 = lk > 0 ? 3.0 * lk + std::log1p(std::exp(-3.0 * lk)) : std::log1p(k * k * k);
    return 2.0 * lk - 1e-4 * k - l1k3 - 2.0 * std::log(std::log(2.0 + k));
  };
  return Profile(Profile::Analytic{"three-regime", [logv](double k) { return std::exp(logv(k)); }, logv,
                                   [](double k) {
                                     const double k3 = k * k * k;
                                     return 2.0 - 1e-4 * k - 3.0 * k3 / (1.0 + k3) -
                                            2.0 * k / ((2.0 + k) * std::log(2.0 + k));
                                   },
                                   {0.0, inf}, {}, {0.1, 1e5}});
}

// k^{-alpha} on [k1, k2), k2^{beta-alpha} k^{-beta} on [k2, k3].
inline Profile make_multi_regime(double alpha, double beta, double k1, double k2, double k3) {
  if (!(k1 > 0 && k1 < k2 && k2 < k3 && std::isfinite(k3))) throw DomainError("multi regime: need 0 < k1 < k2 < k3");
  const double c = (beta - alpha) * std::log(k2);
  auto logv = [alpha, beta, k2, c](double k) { return k < k2 ? -alpha * std::log(k) : c - beta * std::log(k); };
  return Profile(Profile::Analytic{"multi-regime", [logv](double k) { return std::exp(logv(k)); }, logv,
                                   [alpha, beta, k2](double k) { return k < k2 ? -alpha : -beta; }, {k1, k3}, {k2},
                                   {k1, k3}});
}

namespace detail {

// theta(k) = int_1^k 50 sin(5t) exp(-t - 1/t) dt / t, tabulated in u = log t.
class OdeTheta {
 public:
  static double forcing(double t) { return 50.0 * std::sin(5.0 * t) * std::exp(-t - 1.0 / t); }

  OdeTheta() : u0_(std::log(1e-3)), u1_(std::log(80.0)), n_(4096) {
    h_ = (u1_ - u0_) / n_;
    table_.assign(n_ + 1, 0.0);
    for (int j = 0; j < n_; ++j) table_[j + 1] = table_[j] + cell(u0_ + j * h_, u0_ + (j + 1) * h_);
    offset_ = raw(0.0);
  }

  double operator()(double k) const { return raw(std::log(k)) - offset_; }

 private:
  static double cell(double a, double b) {
    return gauss_legendre16([](double u) { return forcing(std::exp(u)); }, a, b);
  }
  double raw(double u) const {
    if (u <= u0_) return table_.front();
    if (u >= u1_) return table_.back();
    const int j = std::min(n_ - 1, int((u - u0_) / h_));
    const double a = u0_ + j * h_;
    return table_[j] + (u > a ? cell(a, u) : 0.0);
  }

  double u0_, u1_, h_;
  int n_;
  std::vector<double> table_;
  double offset_ = 0.0;
};

}  // namespace detail

// Solution of k f'/f = -3/2 + 50 sin(5k) exp(-k - 1/k) with f(1) = 1.
inline Profile make_ode_fluctuation() {
  auto theta = std::make_shared<const detail::OdeTheta>();
  auto logv = [theta](double k) { return -1.5 * std::log(k) + (*theta)(k); };
  return Profile(Profile::Analytic{"ode-fluctuation", [logv](double k) { return std::exp(logv(k)); }, logv,
                                   [](double k) { return -1.5 + detail::OdeTheta::forcing(k); }, {0.0, inf}, {},
                                   {1e-2, 1e2}});
}

// ---------------------------------------------------------------------------
// Sampled data

inline Profile load_sampled(const std::vector<std::pair<double, double>>& rows) { return Profile::sampled(rows); }

// Rows (k, f(k)) of p at the given abscissae.
inline std::vector<std::pair<double, double>> sample_rows(const Profile& p, const std::vector<double>& ks) {
  std::vector<std::pair<double, double>> rows;
  rows.reserve(ks.size());
  for (double k : ks) rows.emplace_back(k, p(k));
  return rows;
}

// CSV `k,f`: optional header line, '#' comments, blank lines ignored.
inline std::vector<std::pair<double, double>> parse_spectrum_csv(std::istream& in) {
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto comma = line.find(',');
    auto parse = [&](const std::string& s, double& out) {
      std::size_t pos = 0;
      try {
        out = std::stod(s, &pos);
      } catch (const std::exception&) {
        return false;
      }
      return s.find_first_not_of(" \t\r", pos) == std::string::npos;
    };
    double k = 0, f = 0;
    const bool ok = comma != std::string::npos && parse(line.substr(0, comma), k) && parse(line.substr(comma + 1), f);
    if (!ok) {
      if (!seen_data && rows.empty()) {
        seen_data = true;  // header
        continue;
      }
      throw FormatError("cannot parse line " + std::to_string(lineno) + " as two numbers", rows.size() + 1);
    }
    seen_data = true;
    rows.emplace_back(k, f);
  }
  return rows;
}

inline std::string write_spectrum_csv(const std::vector<std::pair<double, double>>& rows) {
  std::ostringstream os;
  os << "k,f\n" << std::setprecision(17);
  for (const auto& [k, f] : rows) os << k << ',' << f << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Moments

namespace detail {

// Exact integral of k^n c (k/k0)^s over [a, b].
inline double power_segment_integral(double n, double c, double k0, double s, double a, double b) {
  // c (k/k0)^s k^n over (a, b), anchored at a so no power overflows
  const double e = n + s + 1.0, lr = std::log(b / a);
  const double lead = std::exp(std::log(c) + s * std::log(a / k0) + (n + 1.0) * std::log(a));
  const double x = e * lr;
  if (std::abs(x) < 1e-8) return lead * lr * (1.0 + 0.5 * x);
  return lead * std::expm1(x) / e;
}

}  // namespace detail

// Integral of k^order f(k) over (a, b), b may be inf. Relative tolerance rel_tol.
inline double moment(const Profile& p, int order, double a, double b, double rel_tol = 1e-9) {
  if (!(a >= 0 && b > a)) throw DomainError("moment: need 0 <= a < b");
  const Interval s = p.support();
  const double lo = std::max(a, s.lo), hi = std::min(b, s.hi);
  if (!(hi > lo)) return 0.0;

  if (p.is_sampled()) {
    const auto& n = p.nodes();
    const auto& sl = p.segment_slopes();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n.size(); ++i) {
      const double u = std::max(lo, n[i].first), v = std::min(hi, n[i + 1].first);
      if (v > u) total += detail::power_segment_integral(order, n[i].second, n[i].first, sl[i], u, v);
    }
    return total;
  }

  auto g = [&p, order](double k) { return std::pow(k, order) * p(k); };
  const double abs_floor = std::numeric_limits<double>::min();

  // finite core [c0, c1] split at breakpoints and powers of ten
  double c0 = lo, c1 = hi;
  if (c0 == 0.0) c0 = std::min(hi, p.scale().lo > 0 ? p.scale().lo : 1.0);
  if (std::isinf(c1)) {
    c1 = std::max(c0, p.scale().hi);
    if (!p.breakpoints().empty()) c1 = std::max(c1, p.breakpoints().back());
  }
  std::vector<double> cuts{c0, c1};
  for (double bp : p.breakpoints())
    if (bp > c0 && bp < c1) cuts.push_back(bp);
  for (double dec = std::pow(10.0, std::ceil(std::log10(c0))); dec < c1; dec *= 10.0)
    if (dec > c0) cuts.push_back(dec);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += integrate_adaptive(g, cuts[i], cuts[i + 1], abs_floor, 0.1 * rel_tol, 2000).value;

  // Geometric panels from `from` toward `to` (factor 1/2 toward 0, 2 toward inf);
  // stops when the extrapolated remainder is negligible.
  auto sweep = [&](double from, double to, double factor) {
    std::vector<double> panels;
    double k = from;
    while (true) {
      double next = factor > 1 ? std::min(to, factor * k) : std::max(to, factor * k);
      if (factor > 1 && !(next <= 1e300)) throw DivergenceError("moment: tail does not converge");
      if (factor < 1 && next < 1e-300) next = to;
      const double u = std::min(k, next), v = std::max(k, next);
      const double val = integrate_adaptive(g, u, v, abs_floor, 0.1 * rel_tol, 400).value;
      total += val;
      panels.push_back(val);
      if (next == to) return;
      k = next;
      const std::size_t m = panels.size();
      if (m < 8) continue;
      const double last = panels[m - 1], earlier = panels[m - 5];
      if (last <= 0.0) {
        if (earlier <= 0.0) return;
        continue;
      }
      const double ratio = std::pow(last / earlier, 0.25);
      if (m >= 40 && ratio > 0.97) throw DivergenceError("moment: integral does not converge");
      if (ratio < 1.0) {
        const double rest = last * ratio / (1.0 - ratio);
        if (rest <= 0.1 * rel_tol * std::abs(total)) {
          total += rest;
          return;
        }
      }
    }
  };
  if (c0 > lo) sweep(c0, lo, 0.5);
  if (hi > c1) sweep(c1, hi, 2.0);
  return total;
}

struct MomentTable {
  double a = 0.0, b = inf;
  double zeroth = 0.0;
  double second = 0.0;
  std::optional<double> fourth;  // empty when divergent
};

inline MomentTable moment_table(const Profile& p, double a = 0.0, double b = inf) {
  MomentTable t;
  t.a = a;
  t.b = b;
  t.zeroth = moment(p, 0, a, b);
  t.second = moment(p, 2, a, b);
  try {
    t.fourth = moment(p, 4, a, b);
  } catch (const DivergenceError&) {
  }
  return t;
}

// Throws DivergenceError unless f is integrable on (0, inf).
inline double screen_integrable(const Profile& p) { return moment(p, 0, 0.0, inf); }

}  // namespace wkt
