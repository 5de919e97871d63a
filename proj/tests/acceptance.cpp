// Acceptance runner: one PASS/FAIL line per criterion. `acceptance acN` runs one, no argument runs all.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "property_cases.hpp"
#include "wkt/wkt.hpp"

using namespace wkt;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [violated: " << what << "]";
    }
  }
};

struct Criterion {
  const char* id;
  const char* title;
  double budget_s;
  std::function<void(Verdict&)> run;
};

// Composite trapezoid on [a, b]; kernels from closed forms or std::cyl_bessel_j.
double trapezoid(int d, const Profile& p, double a, double b, double lambda, int n = 1000000) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double k = a + i * h, x = 2.0 * pi * lambda * k;
    double H;
    if (d == 1)
      H = 1.0 - std::cos(x);
    else if (d == 3)
      H = 1.0 - std::sin(x) / x;
    else
      H = 1.0 - std::tgamma(0.5 * d) * std::pow(pi * lambda * k, 1.0 - 0.5 * d) * std::cyl_bessel_j(0.5 * d - 1.0, x);
    s += (i == 0 || i == n ? 0.5 : 1.0) * H * p(k);
  }
  return s * h;
}

void report_failures(Verdict& v, const std::vector<CheckReport>& rs) {
  for (const CheckReport& r : rs)
    if (r.status == CheckStatus::fail) v.require(false, r.id + " " + r.config + " lhs=" + detail::fmt(r.lhs) + " rhs=" + detail::fmt(r.rhs));
}

int count(const std::vector<CheckReport>& rs, const std::string& id, CheckStatus s) {
  int n = 0;
  for (const CheckReport& r : rs) n += r.id == id && r.status == s;
  return n;
}

void ac1(Verdict& v) {
  double e1 = 0, e3 = 0;
  for (int i = 0; i < 10000; ++i) {
    const double s = std::pow(10.0, -4.0 + 7.0 * i / 9999.0), x = 2 * pi * s;
    e1 = std::max(e1, std::abs(kernel_h(Dim(1), s) - (1 - std::cos(x))));
    e3 = std::max(e3, std::abs(kernel_h(Dim(3), s) - (1 - std::sin(x) / x)));
  }
  v.detail << "sigma in [1e-4,1e3]: max|H_1 err|=" << e1 << " max|H_3 err|=" << e3;
  v.require(e1 <= 1e-12 && e3 <= 1e-12, "closed-form error <= 1e-12");
}

void ac2(Verdict& v) {
  const auto rs = check_kernel_tables();
  int pass = 0;
  for (const CheckReport& r : rs) pass += r.status == CheckStatus::pass;
  v.detail << pass << "/" << rs.size() << " table bounds hold for d=2..6";
  report_failures(v, rs);
  v.require(rs.size() >= 15, "c-, c+ and C_L reported for each d");
}

void ac3(Verdict& v) {
  const double w = wk_point(Dim(3), make_truncated_power(2.0, 1e-3, 1e6), 1.0).value, ex = pi * pi / 2;
  v.detail << "WK_3(1)=" << w << " vs pi^2/2=" << ex;
  v.require(std::abs(w - ex) <= 1e-2 * ex, "truncated fixed point within 1%");
  double worst = 0;
  for (int d : {2, 3})
    for (double a : {1.2, 5.0 / 3.0, 2.5}) {
      const Profile p = make_power_law(1.0, -a);
      const double c = homogeneous_constant(Dim(d), a);
      for (double l : log_grid(0.1, 10.0, 4)) {
        const double r = std::abs(wk_point(Dim(d), p, l).value / std::pow(l, a - 1) / c - 1);
        worst = std::max(worst, r);
      }
    }
  v.detail << "; homogeneous constant max rel dev=" << worst;
  v.require(worst <= 1e-2, "WK/lambda^(alpha-1) within 1% of the homogeneous constant");
}

void ac4(Verdict& v) {
  struct Compact {
    Profile p;
    double a, b;
  };
  const std::vector<Compact> profiles{{make_truncated_power(1.3, 1.0, 2.0), 1.0, 2.0},
                                      {make_multi_regime(1.4, 2.4, 0.5, 1.0, 3.0), 0.5, 3.0}};
  double worst = 0;
  int pairs = 0;
  auto compare = [&](const Compact& c, int d, double l) {
    const double w = wk_point(Dim(d), c.p, l).value, o = trapezoid(d, c.p, c.a, c.b, l);
    worst = std::max(worst, std::abs(w - o) / o);
    ++pairs;
  };
  for (int d : {1, 2, 3, 4, 5})
    for (double l : {1e-3, 0.37, 31.0, 1e3}) compare(profiles[0], d, l);
  // a breakpoint inside the support
  for (int d : {2, 3})
    for (double l : {0.37, 31.0}) compare(profiles[1], d, l);
  v.detail << pairs << " (profile, d, lambda) triples, max rel err=" << worst;
  v.require(pairs >= 20, "20 pairs");
  v.require(worst <= 1e-6, "relative error <= 1e-6");
}

void ac5(Verdict& v) {
  const Profile f = make_ode_fluctuation();
  const GaugeReport g = gauge_report(f, -1.5, 0.0, inf);
  v.detail << "gauges (P0,P1,Pinf)=(" << g.p_zero << "," << g.p_one << "," << g.p_inf << ") vs (3.16,7.27,6.75)";
  v.require(std::abs(g.p_zero - 3.16) <= 0.05, "P0 within 0.05 of 3.16");
  v.require(std::abs(g.p_one - 7.27) <= 0.05, "P1 within 0.05 of 7.27");
  v.require(std::abs(g.p_inf - 6.75) <= 0.05, "Pinf within 0.05 of 6.75");
  for (int d : {2, 3}) {
    const auto rs = check_thm1(Dim(d), f, 1.5);
    report_failures(v, rs);
    v.require(count(rs, "thm1.sup", CheckStatus::pass) == 1 && count(rs, "thm1.integral", CheckStatus::pass) == 1,
              "both inequalities evaluated and hold for d=" + std::to_string(d));
  }
}

void ac6(Verdict& v) {
  const double d0 = kernel_constants(Dim(3)).delta0;
  const auto rs = check_thm2(Dim(3), make_two_regime(2, 4, 10), {d0, d0 / 2, d0 / 4});
  report_failures(v, rs);
  v.require(count(rs, "thm2.sup", CheckStatus::pass) == 3, "sup bound holds for all three deltas");
  double worst = 0;
  for (const CheckReport& r : rs)
    if (r.id == "thm2.sup") worst = std::max(worst, r.lhs / r.rhs);
  const CheckReport e = check_thm2_exponent(Dim(3), make_truncated_power(2, 1, 10), log_grid(1e-4, 1e-2, 2));
  v.detail << "max lhs/rhs=" << worst << "; exponent |p-2|=" << e.lhs;
  v.require(e.status == CheckStatus::pass, "exponent 2 +- 0.2");
}

void ac7(Verdict& v) {
  const Profile p = make_two_regime(2, 4, 10);
  for (int d : {2, 3}) {
    const double e0 = kernel_constants(Dim(d)).eta0;
    const auto rs = check_thm3(Dim(d), p, {e0, 10 * e0, 100 * e0});
    report_failures(v, rs);
    for (const CheckReport& r : rs)
      if (r.id == "thm3.decay" || r.id == "thm3.limit") v.detail << r.id << "(d=" << d << ")=" << r.lhs << " ";
    v.require(count(rs, "thm3.decay", CheckStatus::pass) == 1, "decay slope for d=" + std::to_string(d));
    v.require(count(rs, "thm3.limit", CheckStatus::pass) == 1, "limit value for d=" + std::to_string(d));
  }
}

void ac8(Verdict& v) {
  const Profile three = make_three_regime();
  const RangePlan plan = plan_dual_range(Dim(3), three, 1.53, 1.0, 1e4);
  const double decades = std::log10(plan.dual_interval.hi / plan.dual_interval.lo);
  const CheckReport t = check_thm4(Dim(3), three, 1.53, 1.0, 1e4);
  v.detail << "three-regime: " << decades << " decades, slope gauge " << t.lhs << " <= " << t.rhs;
  v.require(plan.feasible && decades >= 3.0, "dual interval of at least 3 decades");
  v.require(t.status == CheckStatus::pass, "measured slope within the bound");
  const Profile multi = make_multi_regime(1.4, 2.4, 1, 100, 1e4);
  const CheckReport hi = check_plateau(Dim(3), multi, 2.4, 100, 1e4), lo = check_plateau(Dim(3), multi, 1.4, 1, 100);
  v.detail << "; plateau deviations " << hi.lhs << ", " << lo.lhs;
  v.require(hi.status == CheckStatus::pass && lo.status == CheckStatus::pass, "plateaus within 0.1");
}

void ac9(Verdict& v) {
  const std::vector<Profile> families{make_power_law(1.0, -5.0 / 3.0), make_truncated_power(5.0 / 3.0, 1, 1e4),
                                      make_two_regime(2, 4, 10),       make_three_regime(),
                                      make_multi_regime(1.4, 2.4, 1, 100, 1e4), make_ode_fluctuation()};
  int reports = 0, gaps = 0;
  for (const Profile& p : families) {
    const auto rs = check_comparisons(p);
    for (const CheckReport& r : rs) {
      if (r.id.rfind("comparison.sandwich", 0) != 0) continue;
      ++reports;
      v.require(r.status == CheckStatus::pass, r.id + " " + r.config);
    }
    bool finite = true;
    try {
      moment(p, 2, 0.0, inf);
    } catch (const DivergenceError&) {
      finite = false;
    }
    if (!finite) continue;
    for (int d : {2, 3}) {
      const KernelConstants kc = kernel_constants(Dim(d));
      const FlatSharpGap g = flat_sharp_gap(Dim(d), p, kc.delta0, kc.eta0);
      ++gaps;
      v.require(g.gap_ok && g.k_flat < g.k_sharp, "gap " + p.name() + " d=" + std::to_string(d));
    }
  }
  v.detail << reports << " sandwich reports on " << families.size() << " families, " << gaps << " gap checks";
  v.require(reports > 0 && gaps > 0, "sandwich and gap checks ran");
}

void ac10(Verdict& v) {
  const auto outcomes = props::run_gauge_properties(60, 20240611);
  for (const props::Outcome& o : outcomes) {
    v.detail << o.name << " " << o.instances - o.failures << "/" << o.instances << "; ";
    v.require(o.passed(50), o.name + " (first failure: " + o.first_failure + ")");
  }
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c{
      {"ac1", "kernel closed forms", 1, ac1},
      {"ac2", "kernel bound tables", 5, ac2},
      {"ac3", "homogeneous fixed point", 30, ac3},
      {"ac4", "trapezoid oracle equivalence", 60, ac4},
      {"ac5", "ODE example gauges and the fluctuation bounds", 60, ac5},
      {"ac6", "small-scale sup bound and exponent", 120, ac6},
      {"ac7", "large-scale decay and limit", 120, ac7},
      {"ac8", "dual-range slope bound and plateaus", 180, ac8},
      {"ac9", "dimension sandwich and threshold gap", 60, ac9},
      {"ac10", "gauge algebra properties", 30, ac10},
  };
  return c;
}

bool run(const Criterion& c) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.run(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.require(secs < c.budget_s, "runtime budget " + detail::fmt(c.budget_s) + " s");
  std::string id = c.id;
  for (char& ch : id) ch = char(std::toupper(ch));
  std::printf("%s %s: %s | %s (%.2f s)\n", v.ok ? "PASS" : "FAIL", id.c_str(), c.title, v.detail.str().c_str(), secs);
  std::fflush(stdout);
  return v.ok;
}

}  // namespace

int main(int argc, char** argv) {
  bool all_ok = true, matched = false;
  for (const Criterion& c : criteria()) {
    if (argc > 1 && std::string(argv[1]) != c.id) continue;
    matched = true;
    all_ok = run(c) && all_ok;
  }
  if (!matched) {
    std::fprintf(stderr, "unknown criterion %s (expected ac1..ac10)\n", argv[1]);
    return 2;
  }
  return all_ok ? 0 : 1;
}
