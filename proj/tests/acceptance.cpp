// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance               run every criterion
//   acceptance --criterion N run criterion N only
//
// Exit status is 0 only if every selected criterion passes. Tolerances are
// pinned below; the Monte Carlo criteria use the tolerance namespace of the
// library, which is what `reckern run` reports as well.

#include "reckern/asymptotics.hpp"
#include "reckern/bandwidth.hpp"
#include "reckern/estimator.hpp"
#include "reckern/montecarlo.hpp"
#include "reckern/numeric.hpp"
#include "reckern/stats.hpp"

#include "batch_oracle.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace reckern;

namespace {

constexpr double equivalence_rel = 1e-12;
constexpr double equivalence_seconds = 10.0;
constexpr double beta_rel = 5e-3;
constexpr double beta_seconds = 5.0;
constexpr std::uint64_t beta_n = 1000000;
constexpr double roundtrip_abs = 1e-9;
constexpr int ks_size_required = 195;

// Free bandwidth constant c per Monte Carlo criterion (the criteria fix nu,
// n, M and x but not c); see README for why each value was chosen.
constexpr double c_bias = 0.9;
constexpr double c_moments = 0.1;
constexpr double c_clt = 0.5;
constexpr double c_corollary = 0.1;

constexpr std::uint64_t master_seed = 20240611;

struct Outcome
{
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double
seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string
fmt(double v)
{
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

ExperimentPlan
quadratic_plan(double c,
               double nu,
               double ell,
               std::uint64_t n,
               std::size_t m,
               std::vector<Point> grid,
               std::uint64_t seed,
               StatisticSet statistics)
{
  ExperimentPlan plan{ make_ar1_model(0.5, 0.5, RegressionShape::quadratic),
                       { Kernel(KernelFamily::gaussian, 1), BandwidthSchedule(c, nu, 1, ell),
                         std::move(grid), Truncation{ 6.0, 1.0 },
                         ResponseTransform::identity() },
                       n, m, seed, statistics };
  return plan;
}

const CheckResult*
find_check(const std::vector<CheckResult>& checks, const std::string& name, double x)
{
  for (const auto& c : checks)
    if (c.name == name && c.x.size() == 1 && c.x[0] == x)
      return &c;
  return nullptr;
}

// Collects named sub-results into one line.
struct Tally
{
  bool pass = true;
  std::string detail;

  void add(const std::string& label, bool ok, const std::string& text)
  {
    pass = pass && ok;
    if (!detail.empty())
      detail += "; ";
    detail += label + (ok ? " ok " : " FAIL ") + text;
  }
  void add(const std::string& label, const CheckResult* check)
  {
    if (!check) {
      add(label, false, "missing");
      return;
    }
    add(label, check->pass,
        "obs " + fmt(check->observed) + " vs " + fmt(check->expected) + " (" + check->detail +
          ")");
  }
  Outcome done() const { return { pass, detail }; }
};

Outcome
criterion_1()
{
  const auto start = Clock::now();
  std::mt19937_64 rng(master_seed);
  std::uniform_int_distribution<int> pick_dim(1, 2), pick_ell(0, 3), pick_n(1, 500),
    pick_family(0, 1);
  std::normal_distribution<double> normal;
  const double ells[] = { 0.0, 0.25, 0.5, 1.0 };
  double worst = 0.0;
  int configurations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = static_cast<std::size_t>(pick_dim(rng));
    const double ell = ells[pick_ell(rng)];
    const int n = pick_n(rng);
    const bool gaussian = pick_family(rng) == 0;
    const double c = 0.5 + std::abs(normal(rng));
    const double nu = 0.9 / (static_cast<double>(d) + 2.0) * std::abs(std::tanh(normal(rng)));
    std::vector<Point> grid;
    for (int g = 0; g < 6; ++g) {
      Point p(d);
      for (auto& v : p)
        v = normal(rng);
      grid.push_back(p);
    }
    const Truncation trunc{ 1.0, 1.0 };
    RecursiveEstimator est({ Kernel(gaussian ? KernelFamily::gaussian : KernelFamily::epanechnikov, d),
                             BandwidthSchedule(c, nu, d, ell), grid, trunc,
                             ResponseTransform::identity() });
    oracle::Stream s;
    for (int i = 0; i < n; ++i) {
      Point x(d);
      for (auto& v : x)
        v = normal(rng);
      const double y = x[0] * x[0] + normal(rng);
      s.x.push_back(x);
      s.y.push_back(y);
      est.update(x, y);
    }
    const auto& st = est.state();
    auto rel = [](long double expected, double actual, long double scale) {
      return scale == 0 ? (actual == 0.0 ? 0.0 : INFINITY)
                        : static_cast<double>(std::abs(actual - expected) / scale);
    };
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto b = oracle::batch(s, grid[g], gaussian, c, nu, ell, trunc);
      worst = std::max({ worst, rel(b.den, st.den[g].value(), b.den),
                         rel(b.num, st.num[g].value(), b.num_abs),
                         rel(b.num_trunc, st.num_trunc[g].value(), b.num_abs),
                         rel(b.s_den, st.sums.s_den(), b.s_den) });
      const auto r = est.r_hat(g);
      if (b.den > 0) {
        if (!r)
          worst = INFINITY;
        else
          worst = std::max(worst, rel(b.num / b.den, *r, b.num_abs / b.den));
      } else if (r) {
        worst = INFINITY;
      }
    }
    ++configurations;
  }
  const double elapsed = seconds_since(start);
  return { worst <= equivalence_rel && elapsed < equivalence_seconds,
           std::to_string(configurations) + " configurations, max relative deviation " +
             fmt(worst) + " (tol " + fmt(equivalence_rel) + "), " + fmt(elapsed) + " s" };
}

Outcome
criterion_2()
{
  const auto start = Clock::now();
  double worst = 0.0;
  std::string worst_case;
  int cases = 0, failing = 0;
  for (std::size_t d : { 1u, 2u }) {
    const double dd = static_cast<double>(d);
    for (double nu : { 0.2, 0.25, 0.3 }) {
      // a set, since r = d coincides with r = 1 when d = 1
      for (double r : std::set<double>{ -dd, 1.0, dd, dd + 2.0 }) {
        if (nu * r >= 1.0)
          continue;
        const BandwidthSchedule schedule(1.0, nu, d, 0.0);
        const double limit = 1.0 / (1.0 - nu * r);
        const double err = std::abs(schedule.b_nr(beta_n, r) - limit) / limit;
        ++cases;
        failing += err >= beta_rel ? 1 : 0;
        if (err > worst) {
          worst = err;
          worst_case = "d=" + std::to_string(d) + " nu=" + fmt(nu) + " r=" + fmt(r);
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  return { worst < beta_rel && elapsed < beta_seconds,
           std::to_string(failing) + "/" + std::to_string(cases) + " cases over tolerance at n=1e6, worst relative error " + fmt(worst) + " at " +
             worst_case + " (tol " + fmt(beta_rel) + "), " + fmt(elapsed) + " s" };
}

Outcome
criterion_3()
{
  Tally tally;
  for (double ell : { 0.0, 1.0 }) {
    const auto plan = quadratic_plan(c_bias, 0.25, ell, 10000, 2000, { { 0.0 } }, master_seed + 3,
                                     StatisticSet::parse("bias_f,bias_phi"));
    const auto checks = evaluate_checks(run(plan));
    const std::string tag = "ell=" + fmt(ell) + " ";
    tally.add(tag + "f", find_check(checks, "bias_f", 0.0));
    tally.add(tag + "phi", find_check(checks, "bias_phi", 0.0));
  }
  return tally.done();
}

Outcome
criterion_4()
{
  Tally tally;
  for (double ell : { 0.0, 1.0 }) {
    const auto plan =
      quadratic_plan(c_moments, 0.25, ell, 10000, 2000, { { 0.0 }, { 1.0 } }, master_seed + 4,
                     StatisticSet::parse("var_f,var_phi_tilde,cov_f_phi"));
    const auto checks = evaluate_checks(run(plan));
    for (double x : { 0.0, 1.0 }) {
      const std::string tag = "ell=" + fmt(ell) + " x=" + fmt(x) + " ";
      tally.add(tag + "var_f", find_check(checks, "var_f", x));
      tally.add(tag + "var_phi", find_check(checks, "var_phi_tilde", x));
      tally.add(tag + "cov", find_check(checks, "cov_f_phi", x));
    }
  }
  return tally.done();
}

McReport
clt_run(double ell)
{
  return run(quadratic_plan(c_clt, 0.25, ell, 10000, 500, { { 0.0 } }, master_seed + 5,
                            StatisticSet::parse("clt_oracle,clt_plugin")));
}

Outcome
criterion_5()
{
  Tally tally;
  for (double ell : { 1.0, 0.0 }) {
    const auto checks = evaluate_checks(clt_run(ell));
    const std::string tag = "ell=" + fmt(ell) + " ";
    tally.add(tag + "KS", find_check(checks, "clt_oracle_ks", 0.0));
    tally.add(tag + "var", find_check(checks, "clt_oracle_var", 0.0));
  }
  return tally.done();
}

Outcome
criterion_6()
{
  Tally tally;
  for (double ell : { 1.0, 0.0 }) {
    auto plan = quadratic_plan(c_corollary, 0.22, ell, 10000, 500, { { 0.0 } }, master_seed + 6,
                               StatisticSet::parse("clt_oracle"));
    plan.bias = BiasTerm::cancel;
    const auto report = run(plan);
    const auto checks = evaluate_checks(report);
    const std::string tag = "ell=" + fmt(ell) + " ";
    tally.add(tag + "B_n=" + fmt(report.points[0].theory.clt.bias_bn) + " KS",
              find_check(checks, "clt_oracle_ks", 0.0));
  }
  return tally.done();
}

Outcome
criterion_7()
{
  Tally tally;
  // same seeds for both estimators: the comparison uses common random numbers
  double var[2];
  for (int k = 0; k < 2; ++k) {
    const auto report = clt_run(static_cast<double>(k));
    const auto& p = report.points[0];
    std::vector<double> unscaled;
    for (double t : p.t_oracle)
      unscaled.push_back(t * p.theory.clt.sd_limit);
    var[k] = stats::variance(unscaled);
  }
  tally.add("empirical Var(T sd)", var[0] <= var[1],
            "ell=0 " + fmt(var[0]) + " <= ell=1 " + fmt(var[1]) + " (theory ratio 0.9375, observed " +
              fmt(var[0] / var[1]) + ")");

  double worst = -INFINITY;
  int points = 0;
  for (std::size_t d : { 1u, 2u, 3u, 4u }) {
    const double u_max = 1.0 / (1.0 + 2.0 / static_cast<double>(d));
    for (int k = 1; k < 100; ++k) {
      const double nu = u_max * k / 100.0 / static_cast<double>(d);
      const double g0 = variance_ratio(BandwidthSchedule(1.0, nu, d, 0.0));
      const double g1 = variance_ratio(BandwidthSchedule(1.0, nu, d, 1.0));
      worst = std::max(worst, g0 - g1);
      ++points;
    }
  }
  tally.add("analytic g(0) <= g(1)", worst <= 0.0,
            "on " + std::to_string(points) + " (u, d) points, max g(0)-g(1) = " + fmt(worst));
  return tally.done();
}

Outcome
criterion_8()
{
  const auto plan = quadratic_plan(c_clt, 0.25, 1.0, 10000, 500, { { 0.0 } }, master_seed + 5,
                                   StatisticSet::parse("clt_oracle"));
  const auto report = run(plan);
  const auto checks = evaluate_checks(report);
  Tally tally;
  tally.add("delta=6 > 2/lambda=" + fmt(2.0 / plan.model.moment.lambda),
            6.0 > 2.0 / plan.model.moment.lambda, "");
  tally.add("max|phi~ - phi|", find_check(checks, "truncation_gap", 0.0));
  tally.detail += "; exceedances " + std::to_string(report.exceedance_total) + " over " +
                  std::to_string(plan.replicates) + " x " + std::to_string(plan.n);
  return tally.done();
}

Outcome
criterion_9()
{
  Tally tally;
  int passes = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::mt19937_64 rng(derive_seed(master_seed, seed));
    std::normal_distribution<double> normal;
    std::vector<double> s(500);
    for (auto& v : s)
      v = normal(rng);
    passes += stats::ks_normal(s).pass ? 1 : 0;
  }
  tally.add("KS size", passes >= ks_size_required,
            std::to_string(passes) + "/200 (need " + std::to_string(ks_size_required) + ")");

  double worst = 0.0, worst_x = 0.0;
  for (int k = -600; k <= 600; ++k) {
    const double x = k / 100.0;
    const double err = std::abs(stats::normal_quantile(stats::normal_cdf(x)) - x);
    if (err > worst) {
      worst = err;
      worst_x = x;
    }
  }
  tally.add("quantile(cdf(x)) on [-6,6]", worst <= roundtrip_abs,
            "max error " + fmt(worst) + " at x=" + fmt(worst_x) + " (tol " + fmt(roundtrip_abs) + ")");
  return tally.done();
}

const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
  { 1, { "recursive/batch equivalence", criterion_1 } },
  { 2, { "B_{n,r} -> beta_r at n=1e6", criterion_2 } },
  { 3, { "bias of f_n and phi_n", criterion_3 } },
  { 4, { "second moments of f_n and phi~_n", criterion_4 } },
  { 5, { "CLT with B_n, ell in {1, 0}", criterion_5 } },
  { 6, { "CLT with bias cancelled, nu=0.22", criterion_6 } },
  { 7, { "variance ordering", criterion_7 } },
  { 8, { "truncation negligibility", criterion_8 } },
  { 9, { "statistical kit calibration", criterion_9 } },
};

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "acceptance criteria" };
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion number(s) to run")
    ->check(CLI::Range(1, static_cast<int>(criteria.size())));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (const auto& [id, _] : criteria)
      selected.push_back(id);

  bool all = true;
  for (int id : selected) {
    const auto& [title, body] = criteria.at(id);
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = body();
    } catch (const std::exception& e) {
      outcome = { false, std::string("exception: ") + e.what() };
    }
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << title
              << " | " << outcome.detail << " | " << fmt(seconds_since(start)) << " s"
              << std::endl;
    all = all && outcome.pass;
  }
  return all ? 0 : 1;
}
