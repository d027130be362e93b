#include "reckern/montecarlo.hpp"

#include "reckern/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace reckern {

namespace {

constexpr Statistic all_statistics[] = {
  Statistic::bias_f,        Statistic::bias_phi,  Statistic::var_f,
  Statistic::var_phi_tilde, Statistic::cov_f_phi, Statistic::clt_oracle,
  Statistic::clt_plugin,
};

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct ReplicateOutcome
{
  std::vector<double> f;
  std::vector<double> phi;
  std::vector<double> phi_tilde;
  std::vector<std::optional<double>> r;
  std::vector<std::optional<double>> plugin_sd;
  std::uint64_t exceedances{ 0 };
};

ReplicateOutcome
run_replicate(const ExperimentPlan& plan, std::size_t replicate)
{
  StreamSampler sampler(plan.model, derive_seed(plan.seed, replicate));
  RecursiveEstimator estimator(plan.estimator);
  Point x;
  double y = 0.0;
  for (std::uint64_t i = 0; i < plan.n; ++i) {
    sampler.next(x, y);
    estimator.update(x, y);
  }

  const auto size = estimator.grid_size();
  const bool truncated = plan.estimator.truncation.has_value();
  ReplicateOutcome out;
  out.f.resize(size);
  out.phi.resize(size);
  out.phi_tilde.resize(size);
  out.r.resize(size);
  out.plugin_sd.resize(size);
  for (std::size_t g = 0; g < size; ++g) {
    out.f[g] = estimator.f_hat(g);
    out.phi[g] = estimator.phi_hat(g);
    out.phi_tilde[g] = truncated ? estimator.phi_tilde(g) : out.phi[g];
    out.r[g] = estimator.r_hat(g);
    if (out.f[g] > 0.0)
      out.plugin_sd[g] =
        plugin_sd(estimator, g, plan.model.conditional_variance(plan.estimator.grid[g]));
  }
  out.exceedances = estimator.state().trunc_exceed_count;
  return out;
}

PointTheory
point_theory(const ExperimentPlan& plan, const Point& x)
{
  const auto& model = plan.model;
  const auto& cfg = plan.estimator;
  PointTheory t{};
  t.f = model.density(x);
  t.r = model.regression(x);
  t.phi = t.r * t.f;
  t.v = model.conditional_variance(x);
  t.b_f = density_bias(model, cfg.kernel, x);
  t.b_phi = phi_bias(model, cfg.kernel, x);
  t.h_n = cfg.schedule.h(plan.n);
  t.bias_ratio = bias_ratio(cfg.schedule);
  t.expected_bias_f = t.h_n * t.h_n * t.bias_ratio * t.b_f;
  t.expected_bias_phi = t.h_n * t.h_n * t.bias_ratio * t.b_phi;
  t.clt = clt_params(model, cfg, x, plan.n, plan.bias);
  t.var_phi_limit = t.clt.sigma_sq * (t.r * t.r + t.v);
  t.cov_limit = t.clt.sigma_sq * t.r;
  return t;
}

std::optional<stats::KsResult>
maybe_ks(const std::vector<double>& sample)
{
  if (sample.size() < stats::ks_min_sample)
    return std::nullopt;
  return stats::ks_normal(sample);
}

double
maybe_variance(const std::vector<double>& values)
{
  return values.size() >= 2 ? stats::variance(values) : nan;
}

std::string
point_label(const Point& x)
{
  std::string out = "(";
  for (std::size_t j = 0; j < x.size(); ++j)
    out += (j ? "," : "") + format_double(x[j]);
  return out + ")";
}

} // namespace

std::string
to_string(Statistic statistic)
{
  switch (statistic) {
    case Statistic::bias_f:
      return "bias_f";
    case Statistic::bias_phi:
      return "bias_phi";
    case Statistic::var_f:
      return "var_f";
    case Statistic::var_phi_tilde:
      return "var_phi_tilde";
    case Statistic::cov_f_phi:
      return "cov_f_phi";
    case Statistic::clt_oracle:
      return "clt_oracle";
    case Statistic::clt_plugin:
      return "clt_plugin";
  }
  return "unknown";
}

StatisticSet
StatisticSet::all()
{
  StatisticSet set;
  for (auto s : all_statistics)
    set.add(s);
  return set;
}

StatisticSet
StatisticSet::parse(std::string_view names)
{
  StatisticSet set;
  std::size_t start = 0;
  while (start <= names.size()) {
    auto end = names.find(',', start);
    if (end == std::string_view::npos)
      end = names.size();
    auto token = names.substr(start, end - start);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front())))
      token.remove_prefix(1);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back())))
      token.remove_suffix(1);
    if (token == "all") {
      set = all();
    } else if (!token.empty()) {
      bool found = false;
      for (auto s : all_statistics) {
        if (to_string(s) == token) {
          set.add(s);
          found = true;
        }
      }
      if (!found)
        throw ArgumentError("unknown statistic '" + std::string(token) + "'");
    }
    start = end + 1;
  }
  return set;
}

bool
StatisticSet::needs_variance() const
{
  return has(Statistic::var_f) || has(Statistic::var_phi_tilde) ||
         has(Statistic::cov_f_phi) || has(Statistic::clt_oracle) ||
         has(Statistic::clt_plugin);
}

std::vector<Statistic>
StatisticSet::members() const
{
  std::vector<Statistic> out;
  for (auto s : all_statistics)
    if (has(s))
      out.push_back(s);
  return out;
}

ValidationReport
validate_plan(const ExperimentPlan& plan)
{
  ValidationReport report = validate_h2(plan.estimator.schedule);
  report.append(validate_h3_h4(plan.model, plan.estimator));

  if (plan.n == 0)
    report.add("plan: stream length", CheckLevel::fail, "n must be >= 1");
  if (plan.replicates == 0)
    report.add("plan: replicates", CheckLevel::fail, "M must be >= 1");
  else if (plan.statistics.needs_variance() && plan.replicates < 2)
    report.add("plan: replicates", CheckLevel::fail,
               "second-moment statistics need M >= 2");

  if (plan.n > 0) {
    const double h = plan.estimator.schedule.h(plan.n);
    const double scale =
      std::sqrt(static_cast<double>(plan.n) *
                std::pow(h, static_cast<double>(plan.estimator.dim())));
    if (scale <= 1.0)
      report.add("plan: scale", CheckLevel::note,
                 "sqrt(n h_n^d) = " + format_double(scale) + " <= 1; asymptotics unreliable");
  }
  if (plan.bias == BiasTerm::cancel && !plan.estimator.schedule.bias_cancels())
    report.add("plan: bias cancellation", CheckLevel::fail,
               "B_n may only be dropped when 1/(d+4) < nu < 1/(d+2)");
  if (!plan.estimator.truncation &&
      (plan.statistics.has(Statistic::var_phi_tilde) ||
       plan.statistics.has(Statistic::cov_f_phi)))
    report.add("plan: truncation", CheckLevel::note,
               "no truncation configured; phi~_n statistics use phi_n");
  return report;
}

std::size_t
resolve_threads(std::size_t requested)
{
  if (requested > 0)
    return requested;
  if (const char* env = std::getenv("RECKERN_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0)
      return static_cast<std::size_t>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

McReport
run(const ExperimentPlan& plan)
{
  const auto validation = validate_plan(plan);
  if (!validation.ok())
    throw ConfigError("experiment plan failed validation:\n" + validation.str());

  const auto& grid = plan.estimator.grid;
  const std::size_t size = grid.size();
  const std::size_t m = plan.replicates;

  std::vector<ReplicateOutcome> outcomes(m);
  {
    const std::size_t workers = std::min(resolve_threads(plan.threads), m);
    std::atomic<std::size_t> next{ 0 };
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (;;) {
        const std::size_t j = next.fetch_add(1);
        if (j >= m)
          return;
        try {
          outcomes[j] = run_replicate(plan, j);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
          next.store(m);
        }
      }
    };
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(work);
    }
    if (failure)
      std::rethrow_exception(failure);
  }

  McReport report;
  report.n = plan.n;
  report.replicates = m;
  report.seed = plan.seed;
  report.ell = plan.estimator.ell();
  report.nu = plan.estimator.schedule.nu();
  report.c = plan.estimator.schedule.c();
  report.dim = plan.estimator.dim();
  report.truncation = plan.estimator.truncation.has_value();
  report.bias = plan.bias;
  report.statistics = plan.statistics;
  report.exceedance_total = 0;
  report.exceedances.reserve(m);
  report.records.reserve(m * size);

  std::vector<PointTheory> theory;
  for (const auto& x : grid)
    theory.push_back(point_theory(plan, x));

  // fixed replicate order keeps the reduction bit-stable
  std::vector<std::vector<double>> t_oracle(size), t_plugin(size);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& out = outcomes[j];
    report.exceedances.push_back(out.exceedances);
    report.exceedance_total += out.exceedances;
    for (std::size_t g = 0; g < size; ++g) {
      const auto& t = theory[g];
      ReplicateRecord rec{ j, g, out.f[g], out.phi[g], out.phi_tilde[g], out.r[g], {}, {} };
      if (out.r[g]) {
        const double centered = *out.r[g] - t.r - t.clt.bias_bn;
        rec.t_oracle = t.clt.scale * centered / t.clt.sd_limit;
        t_oracle[g].push_back(*rec.t_oracle);
        if (out.plugin_sd[g]) {
          rec.t_plugin = t.clt.scale * centered / *out.plugin_sd[g];
          t_plugin[g].push_back(*rec.t_plugin);
        }
      }
      report.records.push_back(rec);
    }
  }

  for (std::size_t g = 0; g < size; ++g) {
    std::vector<double> f, phi, phi_tilde, r;
    f.reserve(m);
    phi.reserve(m);
    phi_tilde.reserve(m);
    double gap = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& out = outcomes[j];
      f.push_back(out.f[g]);
      phi.push_back(out.phi[g]);
      phi_tilde.push_back(out.phi_tilde[g]);
      if (out.r[g])
        r.push_back(*out.r[g]);
      gap = std::max(gap, std::abs(out.phi_tilde[g] - out.phi[g]));
    }

    PointSummary s;
    s.x = grid[g];
    s.theory = theory[g];
    s.mean_f = stats::mean(f);
    s.var_f = maybe_variance(f);
    s.mean_phi = stats::mean(phi);
    s.var_phi = maybe_variance(phi);
    s.mean_phi_tilde = stats::mean(phi_tilde);
    s.var_phi_tilde = maybe_variance(phi_tilde);
    s.cov_f_phi_tilde = m >= 2 ? stats::covariance(f, phi_tilde) : nan;
    s.mean_r = r.empty() ? nan : stats::mean(r);
    s.var_r = maybe_variance(r);
    const double scale_sq = s.theory.clt.scale * s.theory.clt.scale;
    s.scaled_var_f = scale_sq * s.var_f;
    s.scaled_var_phi_tilde = scale_sq * s.var_phi_tilde;
    s.scaled_cov = scale_sq * s.cov_f_phi_tilde;
    s.undefined_count = m - r.size();
    s.max_truncation_gap = gap;
    s.t_oracle = std::move(t_oracle[g]);
    s.t_plugin = std::move(t_plugin[g]);
    if (plan.statistics.has(Statistic::clt_oracle))
      s.ks_oracle = maybe_ks(s.t_oracle);
    if (plan.statistics.has(Statistic::clt_plugin))
      s.ks_plugin = maybe_ks(s.t_plugin);
    report.points.push_back(std::move(s));
  }
  return report;
}

const PointSummary&
McReport::at(std::span<const double> x) const
{
  for (const auto& p : points)
    if (std::equal(p.x.begin(), p.x.end(), x.begin(), x.end()))
      return p;
  throw ArgumentError("point is not in the report");
}

std::vector<double>
standardized_stats(const McReport& report, std::span<const double> x, Standardization mode)
{
  const auto& point = report.at(x);
  return mode == Standardization::oracle ? point.t_oracle : point.t_plugin;
}

std::vector<CheckResult>
evaluate_checks(const McReport& report)
{
  std::vector<CheckResult> checks;
  auto relative = [&](const std::string& name, const Point& x, double observed,
                      double expected, double tol) {
    const double err = std::abs(observed - expected) / std::abs(expected);
    std::ostringstream detail;
    detail << "relative error " << format_double(err);
    checks.push_back({ name, x, observed, expected, tol, err < tol, detail.str() });
  };

  for (const auto& p : report.points) {
    const auto& t = p.theory;
    if (report.statistics.has(Statistic::bias_f) && t.expected_bias_f != 0.0) {
      const double observed = p.mean_f - t.f;
      relative("bias_f", p.x, observed, t.expected_bias_f, tolerance::bias_relative);
      if (std::signbit(observed) != std::signbit(t.expected_bias_f)) {
        checks.back().pass = false;
        checks.back().detail += "; sign mismatch";
      }
    }
    if (report.statistics.has(Statistic::bias_phi) && t.expected_bias_phi != 0.0) {
      const double observed = p.mean_phi - t.phi;
      relative("bias_phi", p.x, observed, t.expected_bias_phi, tolerance::bias_relative);
      if (std::signbit(observed) != std::signbit(t.expected_bias_phi)) {
        checks.back().pass = false;
        checks.back().detail += "; sign mismatch";
      }
    }
    if (report.replicates < 2)
      continue;
    if (report.statistics.has(Statistic::var_f))
      relative("var_f", p.x, p.scaled_var_f, t.clt.sigma_sq, tolerance::moment_relative);
    if (report.statistics.has(Statistic::var_phi_tilde))
      relative("var_phi_tilde", p.x, p.scaled_var_phi_tilde, t.var_phi_limit,
               tolerance::moment_relative);
    if (report.statistics.has(Statistic::cov_f_phi)) {
      if (t.r != 0.0) {
        relative("cov_f_phi", p.x, p.scaled_cov, t.cov_limit, tolerance::moment_relative);
      } else {
        // r(x) = 0: absolute deviation against sigma^2 sqrt(r^2 + V)
        const double tol =
          tolerance::moment_relative * t.clt.sigma_sq * std::sqrt(t.r * t.r + t.v);
        const double dev = std::abs(p.scaled_cov - t.cov_limit);
        checks.push_back({ "cov_f_phi", p.x, p.scaled_cov, t.cov_limit, tol, dev < tol,
                           "absolute deviation " + format_double(dev) });
      }
    }
    if (p.ks_oracle) {
      checks.push_back({ "clt_oracle_ks", p.x, p.ks_oracle->d_stat, 0.0,
                         p.ks_oracle->critical_01, p.ks_oracle->pass,
                         "n_eff " + std::to_string(p.ks_oracle->n_eff) });
      const double v = stats::variance(p.t_oracle);
      const bool in_band = v >= tolerance::clt_var_low && v <= tolerance::clt_var_high;
      checks.push_back({ "clt_oracle_var", p.x, v, 1.0, 0.0, in_band,
                         "band [" + format_double(tolerance::clt_var_low) + ", " +
                           format_double(tolerance::clt_var_high) + "]" });
    }
    if (p.ks_plugin)
      checks.push_back({ "clt_plugin_ks", p.x, p.ks_plugin->d_stat, 0.0,
                         p.ks_plugin->critical_01, p.ks_plugin->pass,
                         "n_eff " + std::to_string(p.ks_plugin->n_eff) });
    if (report.truncation)
      checks.push_back({ "truncation_gap", p.x, p.max_truncation_gap, 0.0,
                         tolerance::truncation_gap,
                         p.max_truncation_gap < tolerance::truncation_gap,
                         "exceedances " + std::to_string(report.exceedance_total) + " at " +
                           point_label(p.x) });
  }
  return checks;
}

} // namespace reckern
