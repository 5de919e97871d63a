#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>

#include "wkt/errors.hpp"
#include "wkt/quadrature.hpp"
#include "wkt/special.hpp"

namespace wkt {

// Space dimension d >= 1.
class Dim {
 public:
  explicit Dim(int d) : d_(d) {
    if (d < 1) throw DomainError("dimension must be >= 1");
  }
  int value() const noexcept { return d_; }
  operator int() const noexcept { return d_; }

 private:
  int d_;
};

struct KernelConstants {
  double c_minus = 0.0;  // lower bound of H_d(s)(1+pi^2 s^2)/(pi^2 s^2)
  double c_plus = 0.0;   // upper bound of the same ratio
  double c_zero = 0.0;   // remainder bound of the two-term expansion at infinity
  double big_c_l = 0.0;  // bound of |L_d|
  double delta0 = 0.0;   // sqrt(d / (2 pi^2))
  double eta0 = 0.0;     // threshold for the large-scale regime (+inf for d = 1)
};

namespace detail {

inline void require_nonneg(double s, const char* what) {
  if (!(s >= 0)) throw DomainError(std::string(what) + ": argument must be >= 0");
}

// Below this value of pi*sigma the hypergeometric series is used.
inline double series_switch(int d) { return std::max(2.0, std::sqrt(0.5 * d)); }

// Accumulates terms t_k = (-pi^2 s^2)^k / (k! (d/2)_k), k >= 1, with weights w(k).
template <class W>
double kernel_series(int d, double s, W&& weight) {
  const double x = -(pi * s) * (pi * s), half = 0.5 * d;
  double t = 1.0, sum = 0.0;
  for (int k = 1; k < 400; ++k) {
    t *= x / (k * (half + k - 1.0));
    const double term = weight(k) * t;
    sum += term;
    if ((k > 2 && std::abs(term) <= 1e-18 * std::abs(sum)) || t == 0.0) break;
  }
  return sum;
}

// Gamma(d/2) (pi s)^e computed in log space.
inline double gamma_power(int d, double s, double e) {
  return std::exp(std::lgamma(0.5 * d) + e * std::log(pi * s));
}

}  // namespace detail

// H_d(sigma) = 1 - Gamma(d/2) (pi sigma)^{1-d/2} J_{d/2-1}(2 pi sigma).
inline double kernel_h(Dim dim, double sigma) {
  detail::require_nonneg(sigma, "kernel_h");
  const int d = dim;
  const double x = 2.0 * pi * sigma;
  if (d == 1) {
    const double s = std::sin(pi * sigma);
    return 2.0 * s * s;
  }
  if (pi * sigma <= detail::series_switch(d))
    return -detail::kernel_series(d, sigma, [](int) { return 1.0; });
  if (d == 3) return 1.0 - std::sin(x) / x;
  return 1.0 - detail::gamma_power(d, sigma, 1.0 - 0.5 * d) * bessel_j(0.5 * d - 1.0, x);
}

// sigma * H_d'(sigma) = 2 Gamma(d/2) (pi sigma)^{2-d/2} J_{d/2}(2 pi sigma).
inline double kernel_sigma_hprime(Dim dim, double sigma) {
  detail::require_nonneg(sigma, "kernel_sigma_hprime");
  const int d = dim;
  const double x = 2.0 * pi * sigma;
  if (d == 1) return x * std::sin(x);
  if (pi * sigma <= detail::series_switch(d))
    return -detail::kernel_series(d, sigma, [](int k) { return 2.0 * k; });
  if (d == 3) return std::sin(x) / x - std::cos(x);
  return 2.0 * detail::gamma_power(d, sigma, 2.0 - 0.5 * d) * bessel_j(0.5 * d, x);
}

inline double kernel_h_deriv(Dim dim, double sigma) {
  if (!(sigma > 0)) throw DomainError("kernel_h_deriv: argument must be > 0");
  return kernel_sigma_hprime(dim, sigma) / sigma;
}

// L_d(z) = 2 H_d(z) - z H_d'(z).
inline double kernel_l(Dim dim, double z) {
  detail::require_nonneg(z, "kernel_l");
  const int d = dim;
  if (pi * z <= detail::series_switch(d))
    return detail::kernel_series(d, z, [](int k) { return 2.0 * k - 2.0; });
  return 2.0 * kernel_h(dim, z) - kernel_sigma_hprime(dim, z);
}

// Beyond this sigma the oscillatory parts of H_d and sigma H_d' are written with
// the Hankel amplitudes below.
inline double oscillation_threshold(Dim dim) {
  const double nu = 0.5 * int(dim);
  return std::max(16.0, nu * nu);
}

// Amplitudes (a, b) of a Bessel-type term c (pi s)^e Gamma(d/2) J_nu(2 pi s) written
// as a cos(2 pi s) + b sin(2 pi s).
inline std::pair<double, double> bessel_amplitudes(int d, double nu, double e, double c, double sigma) {
  const double x = 2.0 * pi * sigma;
  auto [p, q] = hankel_pq(nu, x);
  const double phi = (0.5 * nu + 0.25) * pi;
  const double scale = c * detail::gamma_power(d, sigma, e) * std::sqrt(2.0 / (pi * x));
  const double cp = std::cos(phi), sp = std::sin(phi);
  return {scale * (p * cp + q * sp), scale * (p * sp - q * cp)};
}

// H_d(s) = 1 + a cos(2 pi s) + b sin(2 pi s).
inline std::pair<double, double> kernel_h_amplitudes(Dim dim, double sigma) {
  const int d = dim;
  return bessel_amplitudes(d, 0.5 * d - 1.0, 1.0 - 0.5 * d, -1.0, sigma);
}

// s H_d'(s) = a cos(2 pi s) + b sin(2 pi s).
inline std::pair<double, double> kernel_sigma_hprime_amplitudes(Dim dim, double sigma) {
  const int d = dim;
  return bessel_amplitudes(d, 0.5 * d, 2.0 - 0.5 * d, 2.0, sigma);
}

namespace detail {

// Integral over [z0, z1] (z0 >= oscillation threshold) of a cos(2 pi s) + b sin(2 pi s)
// with amplitudes from amp(s); Levin panels a few periods wide.
template <class Amp>
double oscillatory_integral(Amp&& amp, double z0, double z1) {
  double total = 0.0;
  const double w = 2.0 * pi;
  double a = z0;
  while (a < z1) {
    const double b = std::min(z1, std::max(a + 8.0, 2.0 * a));
    std::vector<std::pair<double, double>> stack{{a, b}};
    while (!stack.empty()) {
      auto [u, v] = stack.back();
      stack.pop_back();
      const double c = 0.5 * (u + v), h = 0.5 * (v - u);
      auto g = [&](double t) {
        auto [ac, as] = amp(c + h * t);
        return std::complex<double>(ac, -as);
      };
      LevinResult r = levin_unit(g, w * h);
      const double ph = w * (c - std::floor(c));
      const std::complex<double> val = h * std::complex<double>(std::cos(ph), std::sin(ph)) * r.value;
      if (r.error * h > 1e-15 * (1.0 + std::abs(total)) && v - u > 1.0) {
        stack.push_back({u, c});
        stack.push_back({c, v});
        continue;
      }
      total += val.real();
    }
    a = b;
  }
  return total;
}

}  // namespace detail

// G_d(z) = integral_0^z s H_d'(s) ds.
inline double kernel_g(Dim dim, double z) {
  detail::require_nonneg(z, "kernel_g");
  const int d = dim;
  if (d == 1) {
    if (pi * z <= 1.0)
      return -z * detail::kernel_series(d, z, [](int k) { return 2.0 * k / (2.0 * k + 1.0); });
    return -z * std::cos(2.0 * pi * z) + std::sin(2.0 * pi * z) / (2.0 * pi);
  }
  const double zs = detail::series_switch(d) / pi;
  if (z <= zs) return -z * detail::kernel_series(d, z, [](int k) { return 2.0 * k / (2.0 * k + 1.0); });
  // G(z) = z H(z) - int_0^z H
  double int_h = -zs * detail::kernel_series(d, zs, [](int k) { return 1.0 / (2.0 * k + 1.0); });
  const double za = std::max(zs, oscillation_threshold(dim));
  const double mid = std::min(z, za);
  // H is entire and varies on the scale 1/(2 pi); 16-point rules on quarter units are exact to round-off
  for (double a = zs; a < mid; a += 0.25) {
    const double b = std::min(mid, a + 0.25);
    int_h += gauss_legendre16([&](double s) { return kernel_h(dim, s); }, a, b);
  }
  if (z > za) {
    int_h += (z - za);
    int_h += detail::oscillatory_integral([&](double s) { return kernel_h_amplitudes(dim, s); }, za, z);
  }
  return z * kernel_h(dim, z) - int_h;
}

// Main term and remainder bound of the two-term expansion of H_d at infinity.
struct AsymptoticExpansion {
  double main = 0.0;
  double remainder_bound = 0.0;
};

namespace detail {

inline double c_zero_table(int d) {
  switch (d) {
    case 1: return 0.0;
    case 2: return 6.34e-3;
    case 3: return 0.0;
    case 4: return 6.05e-3;
    case 5: return 12.1e-3;
    case 6: return 20.2e-3;
    case 10: return 101e-3;
    case 20: return 24.9;
    default: return -1.0;
  }
}

// |H_d - main| sigma^{(d+1)/2}, evaluated without cancellation at large sigma.
inline double scaled_remainder(int d, double sigma) {
  const Dim dim(d);
  const double x = 2.0 * pi * sigma, nu = 0.5 * d - 1.0;
  const double amp = std::exp(std::lgamma(0.5 * d) - 0.5 * d * std::log(pi));
  const double power = std::pow(sigma, 0.5 * (d + 1));
  if (x >= std::max(25.0, nu * nu + 10.0)) {
    auto [p, q] = hankel_pq(nu, x);
    const double chi = (2.0 * sigma - 0.25 * (d - 1)) * pi;
    const double dev = (p - 1.0) * std::cos(chi) - q * std::sin(chi);
    // (pi s)^{1-d/2} sqrt(2/(pi x)) = pi^{-d/2} s^{-(d-1)/2}
    return std::abs(amp * dev) * sigma;
  }
  const double main = 1.0 - amp * std::pow(sigma, -0.5 * (d - 1)) * std::cos((2.0 * sigma - 0.25 * (d - 1)) * pi);
  return std::abs(kernel_h(dim, sigma) - main) * power;
}

// Numerical supremum of the scaled remainder, rounded up by 1e-3 relative.
inline double c_zero_numeric(int d) {
  double best = 0.0;
  const double lo = std::log(1e-2), hi = std::log(1e5);
  const int n = 6000;
  for (int i = 0; i <= n; ++i) best = std::max(best, scaled_remainder(d, std::exp(lo + (hi - lo) * i / n)));
  return best * (1.0 + 1e-3);
}

}  // namespace detail

// c_d^0: table value when printed, otherwise the numerical supremum.
inline double kernel_c_zero(Dim dim) {
  const double t = detail::c_zero_table(dim);
  return t >= 0.0 ? t : detail::c_zero_numeric(dim);
}

inline AsymptoticExpansion kernel_asymptotic(Dim dim, double sigma) {
  if (!(sigma > 0)) throw DomainError("kernel_asymptotic: argument must be > 0");
  const int d = dim;
  const double amp = std::exp(std::lgamma(0.5 * d) - 0.5 * d * std::log(pi));
  AsymptoticExpansion e;
  e.main = 1.0 - amp * std::pow(sigma, -0.5 * (d - 1)) * std::cos((2.0 * sigma - 0.25 * (d - 1)) * pi);
  e.remainder_bound = kernel_c_zero(dim) * std::pow(sigma, -0.5 * (d + 1));
  return e;
}

inline KernelConstants kernel_constants(Dim dim) {
  const int d = dim;
  KernelConstants k;
  static constexpr double cm[] = {0.756, 2.0 / 3.0, 0.5, 0.4, 1.0 / 3.0};
  static constexpr double cp[] = {1.839, 1.487, 1.322, 1.230, 1.172};
  if (d == 1) {
    k.c_minus = 0.0;
    k.c_plus = 2.0;
  } else if (d <= 6) {
    k.c_minus = cm[d - 2];
    k.c_plus = cp[d - 2];
  } else {
    k.c_minus = 2.0 / d;
    k.c_plus = double(d) / (d - 1);
  }
  k.c_zero = kernel_c_zero(dim);
  k.big_c_l = 4.0 * std::pow(pi, 4) / (d * (d + 2.0));
  k.delta0 = std::sqrt(d / (2.0 * pi * pi));
  if (d == 1) {
    k.eta0 = std::numeric_limits<double>::infinity();
  } else {
    const double g = std::exp(std::lgamma(0.5 * d) - 0.5 * d * std::log(pi));  // Gamma(d/2) pi^{-d/2}
    const double first = std::pow(1.0 + (d >= 4 ? 2.0 : 1.0) * g, 2.0 / (d - 1));
    const double second = d >= 4 ? k.c_zero / g : 0.0;
    k.eta0 = std::max(first, second);
  }
  return k;
}

// c_d(alpha) with WK_d[k^{-alpha}](lambda) = c_d(alpha) lambda^{alpha-1}, d in {2, 3}.
inline double homogeneous_constant(Dim dim, double alpha) {
  const int d = dim;
  if (d != 2 && d != 3) throw UnsupportedError("homogeneous_constant: d must be 2 or 3");
  if (!(alpha > 1.0 && alpha < 3.0)) throw DomainError("homogeneous_constant: alpha must lie in (1,3)");
  if (d == 2)
    return 0.5 * std::pow(pi, alpha - 1.0) * std::abs(gamma_fn(-0.5 * (alpha - 1.0))) / gamma_fn(0.5 * (alpha + 1.0));
  // Gamma(-a) sin(a pi/2) = -pi / (2 Gamma(1+a) cos(a pi/2)); regular at a = 2
  return std::pow(2.0 * pi, alpha - 1.0) * (-pi / (2.0 * gamma_fn(1.0 + alpha) * std::cos(0.5 * alpha * pi)));
}

}  // namespace wkt
