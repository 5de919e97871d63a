#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "wkt/special.hpp"

namespace wkt {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;  // integral of |f|, used to scale absolute tolerances
  int evals = 0;
  bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

// Single Gauss-Kronrod 7/15 panel with the usual conservative error heuristic.
template <class F>
QuadResult gauss_kronrod15(F&& f, double a, double b) {
  using namespace detail;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<double, 15> fv{};
  const double fc = f(c);
  double resk = fc * kWgk[7], resg = fc * kWg[3], resabs = std::abs(resk);
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x), f2 = f(c + x);
    fv[j] = f1;
    fv[14 - j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  QuadResult r;
  r.value = resk * h;
  r.abs_value = resabs * std::abs(h);
  resasc *= std::abs(h);
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (r.abs_value > std::numeric_limits<double>::min() / (50 * 2.2e-16))
    err = std::max(err, 50 * 2.2e-16 * r.abs_value);
  r.error = err;
  r.evals = 15;
  if (!std::isfinite(r.value)) r.converged = false;
  return r;
}

// Globally adaptive Gauss-Kronrod: bisect the panel with the largest error until
// error <= max(abs_tol, rel_tol*|value|) or the interval budget is spent.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                              int max_intervals = 400) {
  if (a == b) return {};
  struct Piece {
    double a, b;
    QuadResult r;
    bool operator<(const Piece& o) const { return r.error < o.r.error; }
  };
  std::priority_queue<Piece> heap;
  QuadResult first = gauss_kronrod15(f, a, b);
  QuadResult total = first;
  heap.push({a, b, first});
  int count = 1;
  while (true) {
    const double target = std::max(abs_tol, rel_tol * std::abs(total.value));
    if (total.error <= target) break;
    if (count >= max_intervals) {
      total.converged = false;
      break;
    }
    Piece p = heap.top();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      total.converged = false;
      break;
    }
    heap.pop();
    QuadResult l = gauss_kronrod15(f, p.a, m), r = gauss_kronrod15(f, m, p.b);
    total.value += l.value + r.value - p.r.value;
    total.error += l.error + r.error - p.r.error;
    total.abs_value += l.abs_value + r.abs_value - p.r.abs_value;
    total.evals += 30;
    heap.push({p.a, m, l});
    heap.push({m, p.b, r});
    count += 1;
    if (!std::isfinite(total.value)) {
      total.converged = false;
      break;
    }
  }
  // recompute the error from the pieces to shed accumulated round-off
  double err = 0.0;
  while (!heap.empty()) {
    err += heap.top().r.error;
    heap.pop();
  }
  total.error = err;
  return total;
}

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};

inline GaussRule make_gauss_legendre(int n) {
  GaussRule g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    g.x[i] = z;
    g.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return g;
}

inline const GaussRule& gauss_legendre16() {
  static const GaussRule rule = make_gauss_legendre(16);
  return rule;
}

template <class F>
double gauss_legendre16(F&& f, double a, double b) {
  const GaussRule& g = gauss_legendre16();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 16; ++i) s += g.w[i] * f(c + h * g.x[i]);
  return s * h;
}

namespace detail {

// Chebyshev-Lobatto points cos(pi j / n) and the differentiation matrix on them.
struct ChebyshevGrid {
  int n;
  std::vector<double> t;
  std::vector<double> d;  // row-major (n+1)^2
};

inline ChebyshevGrid make_chebyshev(int n) {
  ChebyshevGrid g{n, std::vector<double>(n + 1), std::vector<double>((n + 1) * (n + 1))};
  for (int j = 0; j <= n; ++j) g.t[j] = std::cos(pi * j / n);
  auto c = [n](int j) { return ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0); };
  for (int i = 0; i <= n; ++i) {
    double row = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double v = c(i) / (c(j) * (g.t[i] - g.t[j]));
      g.d[i * (n + 1) + j] = v;
      row += v;
    }
    g.d[i * (n + 1) + i] = -row;
  }
  return g;
}

inline const ChebyshevGrid& chebyshev(int n) {
  static const ChebyshevGrid g16 = make_chebyshev(16), g32 = make_chebyshev(32);
  return n == 16 ? g16 : g32;
}

// Levin collocation: solve q' + i w q = g on [-1,1] at Chebyshev-Lobatto points and
// return q(1) e^{iw} - q(-1) e^{-iw}, i.e. the integral of g(t) e^{iwt} over [-1,1].
inline std::complex<double> levin_solve(const ChebyshevGrid& g, const std::complex<double>* rhs, double w) {
  using C = std::complex<double>;
  const int m = g.n + 1;
  std::vector<C> a(m * m);
  std::vector<C> b(rhs, rhs + m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a[i * m + j] = g.d[i * m + j] + (i == j ? C(0.0, w) : C(0.0));
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(a[r * m + col]) > std::abs(a[piv * m + col])) piv = r;
    if (piv != col) {
      for (int j = 0; j < m; ++j) std::swap(a[col * m + j], a[piv * m + j]);
      std::swap(b[col], b[piv]);
    }
    const C inv = 1.0 / a[col * m + col];
    for (int r = col + 1; r < m; ++r) {
      const C fac = a[r * m + col] * inv;
      if (fac == C(0.0)) continue;
      for (int j = col; j < m; ++j) a[r * m + j] -= fac * a[col * m + j];
      b[r] -= fac * b[col];
    }
  }
  std::vector<C> q(m);
  for (int r = m - 1; r >= 0; --r) {
    C s = b[r];
    for (int j = r + 1; j < m; ++j) s -= a[r * m + j] * q[j];
    q[r] = s / a[r * m + r];
  }
  const C e(std::cos(w), std::sin(w));
  return q[0] * e - q[m - 1] * std::conj(e);
}

}  // namespace detail

struct LevinResult {
  std::complex<double> value;
  double error = 0.0;
  int evals = 0;
  bool converged = true;
};

// Integral of g(t) e^{i w t} over t in [-1, 1] for smooth, non-oscillatory g
// (complex valued), comparing 16- and 32-point collocation.
template <class G>
LevinResult levin_unit(G&& g, double w) {
  const auto& c32 = detail::chebyshev(32);
  std::array<std::complex<double>, 33> v32{};
  std::array<std::complex<double>, 17> v16{};
  for (int j = 0; j <= 32; ++j) v32[j] = g(c32.t[j]);
  for (int j = 0; j <= 16; ++j) v16[j] = v32[2 * j];
  LevinResult r;
  r.value = detail::levin_solve(c32, v32.data(), w);
  const auto coarse = detail::levin_solve(detail::chebyshev(16), v16.data(), w);
  r.error = std::abs(r.value - coarse);
  r.evals = 33;
  r.converged = std::isfinite(r.error);
  return r;
}

}  // namespace wkt
