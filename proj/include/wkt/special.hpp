#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "wkt/errors.hpp"

namespace wkt {

inline constexpr double pi = std::numbers::pi;

// Gamma function; negative non-integer arguments go through the reflection formula.
inline double gamma_fn(double x) {
  if (x <= 0 && x == std::floor(x)) throw DomainError("gamma: pole at non-positive integer");
  if (x < 0.5) return pi / (std::sin(pi * x) * std::tgamma(1.0 - x));
  return std::tgamma(x);
}

namespace detail {

// Ascending series sum_m (-1)^m (x/2)^(2m+nu) / (m! Gamma(m+nu+1)).
inline double bessel_j_series(double nu, double x) {
  const double h = 0.5 * x;
  double term = std::exp(nu * std::log(h) - std::lgamma(nu + 1.0));
  if (nu + 1.0 < 0) term = std::pow(h, nu) / gamma_fn(nu + 1.0);
  double sum = term;
  const double q = -h * h;
  for (int m = 1; m < 500; ++m) {
    term *= q / (m * (m + nu));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace detail

// Hankel asymptotic factors P, Q with
// J_nu(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - (nu/2 + 1/4) pi.
// The series terminates (and is exact) for half-integer nu.
inline std::pair<double, double> hankel_pq(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0, t = 1.0, prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    t *= (mu - odd * odd) / (k * 8.0 * x);
    if (t == 0.0) break;
    if (k > 2 && std::abs(t) > std::abs(prev)) break;  // asymptotic series started to diverge
    switch (k % 4) {
      case 1: q += t; break;
      case 2: p -= t; break;
      case 3: q -= t; break;
      default: p += t; break;
    }
    if (std::abs(t) < 1e-17) break;
    prev = t;
  }
  return {p, q};
}

namespace detail {

inline double bessel_j_hankel(double nu, double x) {
  auto [p, q] = hankel_pq(nu, x);
  const double phi = (0.5 * nu + 0.25) * pi;
  const double c = std::cos(x), s = std::sin(x);
  const double cchi = c * std::cos(phi) + s * std::sin(phi);
  const double schi = s * std::cos(phi) - c * std::sin(phi);
  return std::sqrt(2.0 / (pi * x)) * (p * cchi - q * schi);
}

// J_{m+1/2}(x), m >= -1.
inline double bessel_j_half(int m, double x) {
  const double nu = m + 0.5;
  if (x == 0.0) return m == -1 ? std::numeric_limits<double>::infinity() : 0.0;
  if (x < std::max(1.0, double(m))) return bessel_j_series(nu, x);
  // spherical Bessel upward recurrence, stable for x > m
  double jm1 = std::cos(x) / x;  // j_{-1}
  double j0 = std::sin(x) / x;   // j_0
  double jm = m == -1 ? jm1 : j0;
  for (int k = 0; k < m; ++k) {
    const double next = (2.0 * k + 1.0) / x * j0 - jm1;
    jm1 = j0;
    j0 = next;
    jm = next;
  }
  return std::sqrt(2.0 * x / pi) * jm;
}

inline double bessel_j_int(int n, double x) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x <= 8.0) return bessel_j_series(n, x);
  if (x >= std::max(25.0, 1.0 * n * n)) return bessel_j_hankel(n, x);
  // Miller backward recurrence normalised by J0 + 2 sum J_2k = 1
  const double top = std::max<double>(n, x);
  int start = int(top + 40.0 + 4.0 * std::cbrt(top) * 2.0);
  start += start % 2;
  double jp1 = 0.0, j = 1e-250, sum = 0.0, jn = 0.0;
  for (int k = start; k > 0; --k) {
    const double jm1 = 2.0 * k / x * j - jp1;
    jp1 = j;
    j = jm1;
    if (k - 1 == n) jn = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) sum += 2.0 * j;
    if (std::abs(j) > 1e200) {
      j *= 1e-200;
      jp1 *= 1e-200;
      sum *= 1e-200;
      jn *= 1e-200;
    }
  }
  sum += j;  // J0 term
  return jn / sum;
}

}  // namespace detail

// Bessel function of the first kind for integer and half-integer orders >= -1/2.
inline double bessel_j(double nu, double x) {
  if (!(x >= 0)) throw DomainError("bessel_j: negative argument");
  const double twice = 2.0 * nu;
  if (twice != std::round(twice) || nu < -0.5 || nu > 200.0)
    throw UnsupportedError("bessel_j: order must be an integer or half-integer in [-1/2, 200]");
  const int n2 = int(std::lround(twice));
  if (n2 % 2 != 0) return detail::bessel_j_half((n2 - 1) / 2, x);
  return detail::bessel_j_int(n2 / 2, x);
}

}  // namespace wkt
