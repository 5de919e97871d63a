#include <gtest/gtest.h>

#include <cmath>

#include "wkt/transform.hpp"

using namespace wkt;

namespace {

// Composite trapezoid over [a, b] with n panels; kernels from closed forms or std::cyl_bessel_j.
double brute_force(int d, const Profile& p, double a, double b, double lambda, int n = 1000000) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double k = a + i * h, x = 2.0 * M_PI * lambda * k;
    double H;
    if (d == 1)
      H = 2.0 * std::pow(std::sin(M_PI * lambda * k), 2);
    else if (d == 3)
      H = 1.0 - std::sin(x) / x;
    else
      H = 1.0 - std::tgamma(0.5 * d) * std::pow(M_PI * lambda * k, 1.0 - 0.5 * d) * std::cyl_bessel_j(0.5 * d - 1.0, x);
    s += (i == 0 || i == n ? 0.5 : 1.0) * H * p(k);
  }
  return s * h;
}

}  // namespace

TEST(Transform, ClosedForms) {
  const Profile box = make_truncated_power(0.0, 1.0, 2.0);
  // 1 - (sin 4 pi l - sin 2 pi l)/(2 pi l) at l = 1/2
  EXPECT_NEAR(wk_point(Dim(1), box, 0.5).value, 1.0, 1e-13);
  EXPECT_NEAR(hankel_side(Dim(1), box, 0.5), 0.0, 1e-13);
  for (double l : {0.13, 1.7, 23.4}) {
    const double ex = 1.0 - (std::sin(4 * M_PI * l) - std::sin(2 * M_PI * l)) / (2 * M_PI * l);
    EXPECT_NEAR(wk_point(Dim(1), box, l).value, ex, 1e-12 * ex) << l;
  }
  // small lambda, d = 3: leading term (2 pi^2/3)(7/3) l^2
  const double w = wk_point(Dim(3), box, 0.01).value;
  EXPECT_NEAR(w, 1.535e-3, 1e-6);
  EXPECT_NEAR(w, 0.001534466768691, 1e-14);
}

TEST(Transform, BruteForceOracle) {
  const Profile p = make_truncated_power(1.3, 1.0, 2.0);
  for (int d : {1, 2, 3, 5})
    for (double l : {1e-3, 0.37, 31.0, 1e3}) {
      const PointResult r = wk_point(Dim(d), p, l);
      const double o = brute_force(d, p, 1.0, 2.0, l);
      EXPECT_NEAR(r.value, o, 1e-6 * o) << "d=" << d << " l=" << l;
      EXPECT_LE(r.err, 1e-6 * r.value);
    }
}

TEST(Transform, HomogeneousFixedPoint) {
  for (int d : {2, 3})
    for (double a : {1.2, 5.0 / 3.0, 2.0, 2.5}) {
      const Profile p = make_truncated_power(a, 1e-8, 1e16);
      const double c = homogeneous_constant(Dim(d), a);
      for (double l : {1e-3, 1e-1, 1e1})
        EXPECT_NEAR(wk_point(Dim(d), p, l).value / std::pow(l, a - 1.0), c, 1e-2 * c) << d << " " << a << " " << l;
    }
  // c_3(2) = pi^2/2 on a wide truncation
  EXPECT_NEAR(wk_point(Dim(3), make_truncated_power(2.0, 1e-6, 1e6), 1.0).value, M_PI * M_PI / 2, 1e-2 * M_PI * M_PI / 2);
}

TEST(Transform, PowerLawSlope) {
  for (double a : {1.2, 5.0 / 3.0, 2.5}) {
    const Profile p = make_truncated_power(a, 1e-8, 1e16);
    for (double l : {1e-2, 1.0, 1e2}) EXPECT_NEAR(wk_slope(Dim(3), p, l), a - 1.0, 2e-2) << a << " " << l;
  }
}

TEST(Transform, TwoRegimeSlopes) {
  const Profile p = make_two_regime(2, 4, 10);
  const TransformCurve c = wk_curve(Dim(3), p, 1e-4, 1e2, 4);
  for (std::size_t i = 0; i < c.lambda_grid.size(); ++i) {
    const double l = c.lambda_grid[i];
    if (l <= 1e-3) {
      EXPECT_NEAR(c.slopes[i], 2.0, 3e-2) << l;
    }
    if (l >= 10.0) {
      EXPECT_NEAR(c.slopes[i], 0.0, 1e-6) << l;
    }
    EXPECT_LT(c.slopes[i], 2.0);
    EXPECT_LE(c.err_est[i], 1e-8 * c.values[i]);
  }
  // limit values
  EXPECT_NEAR(c.values.back(), M_PI / 6000.0, 1e-9 * M_PI / 6000.0);
}

TEST(Transform, ThreeRegimeIntermediateSlope) {
  const Profile p = make_three_regime();
  // mean log-log slope over three decades
  const double a = 2e-4, b = 2e-1;
  const double m = std::log(wk_point(Dim(3), p, b).value / wk_point(Dim(3), p, a).value) / std::log(b / a);
  EXPECT_NEAR(m, 0.53, 3e-2);
  EXPECT_NEAR(wk_slope(Dim(3), p, 1e-6), 2.0, 5e-3);
  EXPECT_NEAR(wk_slope(Dim(3), p, 1e2), 0.0, 1e-8);
}

TEST(Transform, ScaleCovariance) {
  const Profile p = make_two_regime(2, 4, 10);
  for (double s : {0.01, 3.0, 1e4}) {
    const Profile q = p.dilated(s);
    for (double l : {1e-3, 0.7, 50.0}) {
      const double lhs = wk_point(Dim(3), q, l).value, rhs = wk_point(Dim(3), p, l / s).value / s;
      EXPECT_NEAR(lhs, rhs, 3e-8 * rhs) << s << " " << l;
    }
  }
}

TEST(Transform, MonotoneComparisonAndSandwich) {
  const Profile f = make_two_regime(2, 4, 10);
  const Profile g = f.scaled(1.1) + make_truncated_power(0.0, 3.0, 5.0).scaled(1e-3);
  for (double l = 1e-4; l < 1e4; l *= 3.7) {
    const PointResult a = wk_point(Dim(3), f, l), b = wk_point(Dim(3), g, l);
    EXPECT_LE(a.value, b.value + 2 * (a.err + b.err));
    for (int d : {2, 3, 4}) {
      const PointResult u = wk_point(Dim(d), f, l), v = wk_point(Dim(d + 1), f, l);
      const double slack = u.err + v.err;
      EXPECT_GE(u.value, (d + 1.0) / (d + 2.0) * v.value - slack) << d << " " << l;
      EXPECT_LE(u.value, (d + 1.0) / d * v.value + slack) << d << " " << l;
    }
  }
}

TEST(Transform, SlopeBand) {
  const Profile f = make_ode_fluctuation();
  for (int d : {3, 4, 5})
    for (double l = 1e-4; l < 1e4; l *= 2.9) {
      const double s = wk_slope(Dim(d), f, l);
      EXPECT_LT(s, 2.0);
      EXPECT_GE(s, -2.0);
    }
}

TEST(Transform, LimitValueAndHankelSide) {
  const Profile p = make_truncated_power(1.3, 1.0, 2.0);
  const double total = moment(p, 0, 1.0, 2.0);
  EXPECT_NEAR(wk_point(Dim(3), p, 1e6 / 2.0).value, total, 1e-3 * total);
  EXPECT_NEAR(hankel_side(Dim(3), p, 1e6), 0.0, 1e-8 * total);
  EXPECT_NEAR(hankel_side(Dim(3), p, 1e-8), total, 1e-12 * total);
  const double l = 0.8;
  EXPECT_NEAR(hankel_side(Dim(2), p, l), total - wk_point(Dim(2), p, l).value, 1e-12);
}

TEST(Transform, SlopeOffsetMatchesSlope) {
  const Profile p = make_three_regime();
  for (double a : {0.0, 0.53, 2.0})
    for (double l : {1e-5, 1e-2, 3.0}) {
      const SlopeResult s = wk_slope_offset(Dim(3), p, l, a);
      EXPECT_NEAR(s.slope, wk_slope(Dim(3), p, l) - a, 1e-7) << a << " " << l;
    }
  // 2 - slope stays accurate where slope -> 2
  const double dev = -wk_slope_offset(Dim(3), make_two_regime(2, 4, 10), 1e-6, 2.0).slope;
  EXPECT_GT(dev, 0.0);
  EXPECT_LT(dev, 1e-3);
}

TEST(Transform, SampledProfile) {
  const Profile p = make_three_regime();
  std::vector<double> ks;
  for (int i = 0; i <= 64 * 7; ++i) ks.push_back(std::pow(10.0, -1.0 + i / 64.0));
  const Profile s = Profile::sampled(sample_rows(p, ks));
  // the interpolant misses the mass below 0.1 and above 1e6 only
  for (double l : {1e-4, 1e-2, 1.0}) {
    const double a = wk_point(Dim(3), s, l).value, b = wk_point(Dim(3), p, l).value;
    EXPECT_NEAR(a, b, 2e-2 * b) << l;
    EXPECT_NEAR(wk_slope(Dim(3), s, l), wk_slope(Dim(3), p, l), 5e-2) << l;
  }
}

TEST(Transform, Errors) {
  const Profile p = make_two_regime(2, 4, 10);
  EXPECT_THROW(wk_point(Dim(3), p, 0.0), DomainError);
  EXPECT_THROW(wk_point(Dim(3), p, 1.0, 1e-12), DomainError);
  EXPECT_THROW(wk_curve(Dim(3), p, 1.0, 0.5, 8), DomainError);
  EXPECT_THROW(wk_curve(Dim(3), p, 0.1, 1.0, 3), DomainError);
  // not integrable at infinity
  EXPECT_THROW(wk_point(Dim(3), make_power_law(1.0, -0.5), 1.0), DivergenceError);
  // k^{-3.5} near the origin: H_d ~ s^2 leaves k^{-1.5}
  const Profile head(Profile::Analytic{"head", [](double k) { return std::pow(k, -3.5); }, {},
                                       [](double) { return -3.5; }, {0.0, 1.0}, {}, {1.0, 1.0}});
  EXPECT_THROW(wk_point(Dim(3), head, 1.0), DivergenceError);
}

TEST(Transform, AmendmentKernels) {
  // int_1^2 cos(2 pi l k) dk and int_1^2 l k J_1(2 pi l k) dk against brute force
  const Profile box = make_truncated_power(0.0, 1.0, 2.0);
  for (double l : {0.3, 7.9, 120.0}) {
    const double c = integrate_kernel(fourier_kernel(false), box, l, 1e-10, 1.0).value;
    const double s = integrate_kernel(fourier_kernel(true), box, l, 1e-10, 1.0).value;
    EXPECT_NEAR(c, (std::sin(4 * M_PI * l) - std::sin(2 * M_PI * l)) / (2 * M_PI * l), 1e-10);
    EXPECT_NEAR(s, (std::cos(2 * M_PI * l) - std::cos(4 * M_PI * l)) / (2 * M_PI * l), 1e-10);
    const int n = 400000;
    double o = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double k = 1.0 + double(i) / n;
      o += (i == 0 || i == n ? 0.5 : 1.0) * l * k * std::cyl_bessel_j(1.0, 2 * M_PI * l * k);
    }
    o /= n;
    EXPECT_NEAR(integrate_kernel(bessel_j1_kernel(), box, l, 1e-10, 1.0).value, o, 1e-7 * std::max(1.0, l)) << l;
  }
}

TEST(Transform, WkViewForGauges) {
  const Profile p = make_two_regime(2, 4, 10);
  const WkView v(Dim(3), p);
  EXPECT_NEAR(v.log_value(0.3), std::log(wk_point(Dim(3), p, 0.3).value), 1e-14);
  EXPECT_NEAR(v.slope(0.3), wk_slope(Dim(3), p, 0.3), 1e-10);
  EXPECT_NEAR(v.slope_deviation(0.3, 1.0), wk_slope(Dim(3), p, 0.3) - 1.0, 1e-9);
  EXPECT_NEAR(v.scale().lo, 1e-3, 1e-15);
  EXPECT_NEAR(v.scale().hi, 10.0, 1e-12);
}
