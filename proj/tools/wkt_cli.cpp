// wkt_cli: transforms, gauges, thresholds, range plans and the verification suite from the shell.
// Exit codes: 0 success, 1 numeric failure (or a failed check in `verify`), 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wkt/wkt.hpp"

namespace {

constexpr const char* version = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Family {
  const char* name;
  const char* params;
  int arity;
  const char* about;
};

const std::vector<Family>& families() {
  static const std::vector<Family> f{
      {"power", "c,e", 2, "c k^e on (0, inf)"},
      {"truncated", "alpha,k1,k2", 3, "k^-alpha on [k1, k2]"},
      {"two-regime", "alpha,beta,k0", 3, "k^alpha / (k0^(alpha+beta) + k^(alpha+beta))"},
      {"three-regime", "", 0, "rising, quasi power law over about four decades, then steep decay"},
      {"multi-regime", "alpha,beta,k1,k2,k3", 5, "k^-alpha on [k1, k2], continued as k^-beta on [k2, k3]"},
      {"ode", "", 0, "k f'/f = -3/2 + 50 sin(5k) exp(-k - 1/k), f(1) = 1"},
  };
  return f;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("cannot read '" + s + "' as a number in " + what);
  }
  if (pos != s.size()) throw UsageError("trailing characters in '" + s + "' in " + what);
  return v;
}

// `name:p1,p2,...`
wkt::Profile parse_family(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  std::vector<double> v;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_number(item, "family " + name));
  }
  for (const Family& f : families()) {
    if (name != f.name && !(name == "ode-fluctuation" && std::string(f.name) == "ode")) continue;
    if (int(v.size()) != f.arity)
      throw UsageError("family " + name + " takes " + std::to_string(f.arity) + " parameter(s)" +
                       (f.arity ? std::string(" (") + f.params + ")" : std::string()) + ", got " +
                       std::to_string(v.size()));
    try {
      if (name == "power") return wkt::make_power_law(v[0], v[1]);
      if (name == "truncated") return wkt::make_truncated_power(v[0], v[1], v[2]);
      if (name == "two-regime") return wkt::make_two_regime(v[0], v[1], v[2]);
      if (name == "three-regime") return wkt::make_three_regime();
      if (name == "multi-regime") return wkt::make_multi_regime(v[0], v[1], v[2], v[3], v[4]);
      return wkt::make_ode_fluctuation();
    } catch (const wkt::DomainError& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("unknown family '" + name + "' (see `families`)");
}

struct Config {
  int d = 3;
  std::string family, input, output;
  double tol = 1e-7;
  int ppd = 24;
  double lmin = 1e-3, lmax = 1e3;
};

struct Source {
  wkt::Profile profile;
  std::string label;
};

Source load_profile(const Config& c) {
  if (c.family.empty() == c.input.empty()) throw UsageError("give exactly one of --family or --input");
  if (!c.family.empty()) return {parse_family(c.family), c.family};
  std::ifstream in(c.input);
  if (!in) throw UsageError("cannot open " + c.input);
  return {wkt::load_sampled(wkt::parse_spectrum_csv(in)), "csv:" + c.input};
}

void validate(const Config& c) {
  if (!(c.tol >= 1e-10 && c.tol <= 1e-2)) throw UsageError("--tol must lie in [1e-10, 1e-2]");
  if (c.d < 1) throw UsageError("--d must be >= 1");
  if (c.ppd < 4) throw UsageError("--ppd must be >= 4");
  if (!(c.lmin > 0 && c.lmax > c.lmin && std::isfinite(c.lmax))) throw UsageError("need 0 < --lmin < --lmax < inf");
}

// Single writer: stdout or the --output file.
class Out {
 public:
  explicit Out(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot write " + path);
    }
    stream().precision(12);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void header(std::ostream& o, const Config& c, const std::string& label, const std::string& extra = {}) {
  o << "# wkt_cli " << version << "\n# d=" << c.d << " family=" << label << " tol=" << c.tol;
  if (!extra.empty()) o << ' ' << extra;
  o << '\n';
}

void add_common(CLI::App* s, Config& c, bool window) {
  s->add_option("--d", c.d, "dimension")->capture_default_str();
  s->add_option("--family", c.family, "family as name:p1,p2,...");
  s->add_option("--input", c.input, "CSV spectrum with columns k,f");
  s->add_option("--tol", c.tol, "relative tolerance in [1e-10, 1e-2]")->capture_default_str();
  s->add_option("--ppd", c.ppd, "points per decade")->capture_default_str();
  s->add_option("-o,--output", c.output, "output file (default stdout)");
  if (window) {
    s->add_option("--lmin", c.lmin, "smallest lambda")->capture_default_str();
    s->add_option("--lmax", c.lmax, "largest lambda")->capture_default_str();
  }
}

double parse_bound(const std::string& s, const char* what) {
  if (s == "inf" || s == "+inf") return wkt::inf;
  return parse_number(s, what);
}

int cmd_transform(const Config& c) {
  const Source src = load_profile(c);
  const wkt::TransformCurve t = wkt::wk_curve(wkt::Dim(c.d), src.profile, c.lmin, c.lmax, c.ppd, c.tol);
  Out out(c.output);
  std::ostream& o = out.stream();
  header(o, c, src.label, "ppd=" + std::to_string(c.ppd));
  o << "lambda,value,slope,err\n";
  for (std::size_t i = 0; i < t.lambda_grid.size(); ++i)
    o << t.lambda_grid[i] << ',' << t.values[i] << ',' << t.slopes[i] << ',' << t.err_est[i] << '\n';
  return 0;
}

int cmd_slope(const Config& c, std::optional<double> offset) {
  const Source src = load_profile(c);
  Out out(c.output);
  std::ostream& o = out.stream();
  header(o, c, src.label, "ppd=" + std::to_string(c.ppd) + (offset ? " offset=" + std::to_string(*offset) : ""));
  o << (offset ? "lambda,slope_minus_offset,err\n" : "lambda,slope,err\n");
  for (double l : wkt::log_grid(c.lmin, c.lmax, c.ppd)) {
    const wkt::SlopeResult s = offset ? wkt::wk_slope_offset(wkt::Dim(c.d), src.profile, l, *offset, c.tol)
                                      : wkt::wk_slope_detail(wkt::Dim(c.d), src.profile, l, c.tol);
    o << l << ',' << s.slope << ',' << s.err << '\n';
  }
  return 0;
}

void print_gauges(std::ostream& o, const wkt::GaugeReport& g) {
  o << "alpha=" << g.alpha << "\ninterval=[" << g.interval.lo << "," << g.interval.hi << "]\n";
  auto val = [](double v, bool div) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return div ? std::string("divergent") : s.str();
  };
  o << "p_zero=" << val(g.p_zero, g.zero_divergent) << "\np_one=" << val(g.p_one, g.one_divergent)
    << "\np_inf=" << val(g.p_inf, g.inf_divergent) << "\n";
  if (std::isfinite(g.interval.hi) && g.interval.lo > 0 && !g.zero_divergent) o << "c0=" << g.c0 << "\n";
  o << "grid_uncertainty=" << g.grid_uncertainty << "\nwindow=[" << g.window.lo << "," << g.window.hi << "]\n";
  if (g.exact_interpolant) o << "note=exact for the piecewise power-law interpolant of the sampled data\n";
}

int cmd_gauges(const Config& c, double alpha, const std::string& a, const std::string& b, const std::string& of) {
  const Source src = load_profile(c);
  const double lo = parse_bound(a, "--a"), hi = parse_bound(b, "--b");
  Out out(c.output);
  std::ostream& o = out.stream();
  if (of == "profile") {
    header(o, c, src.label, "of=profile");
    print_gauges(o, wkt::gauge_report(src.profile, alpha, lo, hi));
  } else {
    // gauges of the transform curve; increments below the evaluation noise do not count
    wkt::GaugeOptions go;
    go.points_per_decade = std::max(c.ppd, 16);
    go.abs_floor = c.tol * std::log(10.0);
    header(o, c, src.label, "of=transform ppd=" + std::to_string(go.points_per_decade));
    print_gauges(o, wkt::gauge_report(wkt::WkView(wkt::Dim(c.d), src.profile, c.tol), alpha, lo, hi, go));
  }
  return 0;
}

int cmd_thresholds(const Config& c, std::optional<double> delta, std::optional<double> eta) {
  const Source src = load_profile(c);
  const wkt::KernelConstants kc = wkt::kernel_constants(wkt::Dim(c.d));
  const double dl = delta.value_or(kc.delta0);
  Out out(c.output);
  std::ostream& o = out.stream();
  header(o, c, src.label);
  o << "delta0=" << kc.delta0 << "\neta0=" << kc.eta0 << "\ndelta=" << dl
    << "\nk_sharp=" << wkt::k_sharp(wkt::Dim(c.d), src.profile, dl) << '\n';
  if (c.d >= 2) {
    const double et = eta.value_or(kc.eta0);
    const double kf = wkt::k_flat(wkt::Dim(c.d), src.profile, et);
    o << "eta=" << et << "\nk_flat=" << kf << '\n';
  }
  return 0;
}

int cmd_plan(const Config& c, double alpha, double k1, double k2, bool sweep, double target, int points) {
  Out out(c.output);
  std::ostream& o = out.stream();
  if (sweep) {
    if (points < 2) throw UsageError("--points must be >= 2");
    o << "# wkt_cli " << version << "\n# target=" << target << '\n';
    o << "alpha,min_reynolds\n";
    for (int i = 1; i <= points; ++i) {
      const double a = 1.0 + 2.0 * i / (points + 1);
      o << a << ',' << wkt::min_reynolds(a, target) << '\n';
    }
    return 0;
  }
  const Source src = load_profile(c);
  const wkt::RangePlan r = wkt::plan_dual_range(wkt::Dim(c.d), src.profile, alpha, k1, k2);
  header(o, c, src.label);
  o << "alpha=" << r.alpha << "\nspectral_interval=[" << r.spectral_interval.lo << "," << r.spectral_interval.hi
    << "]\np_zero=" << r.p_zero << "\np_inf=" << r.p_inf << "\nc1=" << r.c1 << "\nc2=" << r.c2 << "\nC=" << r.big_c
    << "\ntarget=" << r.target << (r.target_floored ? " (floored)" : "") << "\nmin_ratio=" << r.min_ratio
    << "\nfeasible=" << (r.feasible ? "true" : "false") << '\n';
  if (r.feasible)
    o << "eps=" << r.eps << "\nmu=" << r.mu << "\nsigma=" << r.sigma_value << "\ndual_interval=["
      << r.dual_interval.lo << "," << r.dual_interval.hi << "]\nrhs_bound=" << r.rhs_bound << '\n';
  return 0;
}

int cmd_verify(const Config& c, const std::string& suite, const std::string& format, double alpha,
               std::optional<double> k1, std::optional<double> k2) {
  std::vector<std::string> names;
  if (suite == "all") names = wkt::suite_names();
  else if (std::find(wkt::suite_names().begin(), wkt::suite_names().end(), suite) != wkt::suite_names().end())
    names = {suite};
  else
    throw UsageError("unknown suite '" + suite + "'");
  if (format != "text" && format != "csv") throw UsageError("--format is text or csv");
  if (!c.input.empty() && !c.family.empty()) throw UsageError("give at most one of --family or --input");
  wkt::VerifyOptions vo;
  vo.tol = std::min(c.tol, 1e-8);  // the slack budgets assume at least this accuracy
  std::vector<wkt::CheckReport> rs;
  std::string label = "default";
  if (c.family.empty() && c.input.empty()) {
    for (const std::string& n : names) {
      auto part = wkt::run_suite(n, vo);
      rs.insert(rs.end(), part.begin(), part.end());
    }
  } else {
    const Source src = load_profile(c);
    label = src.label;
    const wkt::Interval s = src.profile.scale();
    for (const std::string& n : names) {
      auto part = wkt::run_suite(n, wkt::Dim(c.d), src.profile, alpha, k1.value_or(s.lo), k2.value_or(s.hi), vo);
      rs.insert(rs.end(), part.begin(), part.end());
    }
  }
  Out out(c.output);
  std::ostream& o = out.stream();
  header(o, c, label, "suite=" + suite);
  o << (format == "csv" ? wkt::reports_csv(rs) : wkt::reports_text(rs));
  return wkt::all_passed(rs) ? 0 : 1;
}

int cmd_families(const Config& c) {
  Out out(c.output);
  std::ostream& o = out.stream();
  o << "name,params,description\n";
  for (const Family& f : families()) o << f.name << ',' << f.params << ",\"" << f.about << "\"\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wiener-Khinchin transforms, power-law gauges and dual ranges"};
  app.set_version_flag("--version", version);
  app.require_subcommand(1);

  Config c;
  auto* transform = app.add_subcommand("transform", "CSV of WK_d[f] with slope and error estimate");
  add_common(transform, c, true);

  auto* slope = app.add_subcommand("slope", "log-log slope of WK_d[f] on a lambda grid");
  add_common(slope, c, true);
  std::optional<double> offset;
  slope->add_option("--offset", offset, "report slope minus this exponent, integrated directly");

  auto* gauges = app.add_subcommand("gauges", "power-law gauges of f (or of its transform)");
  add_common(gauges, c, false);
  double alpha = 0;
  std::string ga = "0", gb = "inf", of = "profile";
  gauges->add_option("--alpha", alpha, "reference exponent")->required();
  gauges->add_option("--a", ga, "left end")->capture_default_str();
  gauges->add_option("--b", gb, "right end (inf allowed)")->capture_default_str();
  gauges->add_option("--of", of, "profile or transform")->check(CLI::IsMember({"profile", "transform"}))->capture_default_str();

  auto* thresholds = app.add_subcommand("thresholds", "sharp and flat spectral thresholds");
  add_common(thresholds, c, false);
  std::optional<double> delta, eta;
  thresholds->add_option("--delta", delta, "small-scale parameter (default delta0)");
  thresholds->add_option("--eta", eta, "large-scale parameter (default eta0)");

  auto* plan = app.add_subcommand("plan", "dual range for a spectral interval [k1, k2]");
  add_common(plan, c, false);
  double palpha = 5.0 / 3.0, k1 = 1, k2 = 1e4, target = 1.0;
  int points = 99;
  bool sweep = false;
  plan->add_option("--alpha", palpha, "spectral exponent in (1, 3)")->capture_default_str();
  plan->add_option("--k1", k1, "interval start")->capture_default_str();
  plan->add_option("--k2", k2, "interval end")->capture_default_str();
  plan->add_flag("--sweep-alpha", sweep, "emit alpha,min_reynolds over (1, 3)");
  plan->add_option("--target", target, "sigma level for the sweep")->capture_default_str();
  plan->add_option("--points", points, "interior alphas in the sweep")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run the inequality checks");
  add_common(verify, c, false);
  std::string suite = "all", format = "text";
  double valpha = 1.5;
  std::optional<double> vk1, vk2;
  verify->add_option("--suite", suite, "all, kernel, thm1, thm2, thm3, thm4 or comparisons")->capture_default_str();
  verify->add_option("--format", format, "text or csv")->capture_default_str();
  verify->add_option("--alpha", valpha, "exponent for thm1/thm4 with --family")->capture_default_str();
  verify->add_option("--k1", vk1, "thm4 interval start with --family (default profile scale)");
  verify->add_option("--k2", vk2, "thm4 interval end with --family (default profile scale)");

  auto* fam = app.add_subcommand("families", "list the analytic families and their parameters");
  fam->add_option("-o,--output", c.output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!fam->parsed()) validate(c);
    if (transform->parsed()) return cmd_transform(c);
    if (slope->parsed()) return cmd_slope(c, offset);
    if (gauges->parsed()) return cmd_gauges(c, alpha, ga, gb, of);
    if (thresholds->parsed()) return cmd_thresholds(c, delta, eta);
    if (plan->parsed()) return cmd_plan(c, palpha, k1, k2, sweep, target, points);
    if (verify->parsed()) return cmd_verify(c, suite, format, valpha, vk1, vk2);
    return cmd_families(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const wkt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
