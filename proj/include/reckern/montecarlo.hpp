#pragma once

#include "reckern/asymptotics.hpp"
#include "reckern/estimator.hpp"
#include "reckern/models.hpp"
#include "reckern/stats.hpp"
#include "reckern/validation.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reckern {

enum class Statistic : unsigned
{
  bias_f = 1u << 0,
  bias_phi = 1u << 1,
  var_f = 1u << 2,
  var_phi_tilde = 1u << 3,
  cov_f_phi = 1u << 4,
  clt_oracle = 1u << 5,
  clt_plugin = 1u << 6,
};

std::string to_string(Statistic statistic);

class StatisticSet
{
public:
  constexpr StatisticSet() = default;
  static StatisticSet all();
  //! Comma-separated names, or "all".
  static StatisticSet parse(std::string_view names);

  StatisticSet& add(Statistic statistic)
  {
    bits_ |= static_cast<unsigned>(statistic);
    return *this;
  }
  bool has(Statistic statistic) const { return bits_ & static_cast<unsigned>(statistic); }
  bool needs_variance() const;
  std::vector<Statistic> members() const;

private:
  unsigned bits_{ 0 };
};

struct ExperimentPlan
{
  ModelTruth model;
  EstimatorConfig estimator;
  std::uint64_t n{ 0 };
  std::size_t replicates{ 0 };
  std::uint64_t seed{ 0 };
  StatisticSet statistics = StatisticSet::all();
  BiasTerm bias{ BiasTerm::include };
  //! 0: RECKERN_THREADS if set, else hardware concurrency.
  std::size_t threads{ 0 };
};

//! validate_h2 + validate_h3_h4 + plan-level checks (M >= 2 for second
//! moments, scale > 1, bias cancellation only inside its regime).
ValidationReport validate_plan(const ExperimentPlan& plan);

//! Theoretical quantities at one grid point.
struct PointTheory
{
  double f;
  double r;
  double phi;
  double v;
  double b_f;
  double b_phi;
  double h_n;
  double bias_ratio;
  double expected_bias_f;   // h_n^2 * bias_ratio * b_f
  double expected_bias_phi; // h_n^2 * bias_ratio * b_phi
  double var_phi_limit;     // sigma^2 (r^2 + V)
  double cov_limit;         // sigma^2 r
  CltParams clt;
};

struct ReplicateRecord
{
  std::size_t replicate;
  std::size_t grid_index;
  double f_hat;
  double phi_hat;
  double phi_tilde;
  std::optional<double> r_hat;
  std::optional<double> t_oracle;
  std::optional<double> t_plugin;
};

struct PointSummary
{
  Point x;
  PointTheory theory;

  double mean_f;
  double var_f;
  double mean_phi;
  double var_phi;
  double mean_phi_tilde;
  double var_phi_tilde;
  double cov_f_phi_tilde;
  double mean_r;
  double var_r;

  //! n h_n^d times the corresponding empirical moment.
  double scaled_var_f;
  double scaled_var_phi_tilde;
  double scaled_cov;

  std::vector<double> t_oracle;
  std::vector<double> t_plugin;
  std::size_t undefined_count;
  double max_truncation_gap; // max_j |phi~_n - phi_n|

  std::optional<stats::KsResult> ks_oracle;
  std::optional<stats::KsResult> ks_plugin;
};

struct McReport
{
  std::uint64_t n;
  std::size_t replicates;
  std::uint64_t seed;
  double ell;
  double nu;
  double c;
  std::size_t dim;
  bool truncation;
  BiasTerm bias;
  StatisticSet statistics;

  std::vector<PointSummary> points;
  std::vector<ReplicateRecord> records; // replicate-major, grid order within
  std::vector<std::uint64_t> exceedances; // per replicate
  std::uint64_t exceedance_total;

  const PointSummary& at(std::span<const double> x) const;
};

//! Runs plan.replicates independent streams of length plan.n. Results do
//! not depend on the thread count. Throws ConfigError if validate_plan fails.
McReport run(const ExperimentPlan& plan);

enum class Standardization
{
  oracle,
  plugin
};

//! The stored T_j vector at x. Throws ArgumentError if x is not in the report.
std::vector<double> standardized_stats(const McReport& report,
                                       std::span<const double> x,
                                       Standardization mode = Standardization::oracle);

std::size_t resolve_threads(std::size_t requested);

//! Pass/fail of one empirical-vs-theory comparison.
struct CheckResult
{
  std::string name;
  Point x;
  double observed;
  double expected;
  double tolerance;
  bool pass;
  std::string detail;
};

namespace tolerance {
inline constexpr double bias_relative = 0.20;
inline constexpr double moment_relative = 0.10;
inline constexpr double clt_var_low = 0.8;
inline constexpr double clt_var_high = 1.25;
inline constexpr double truncation_gap = 1e-3;
} // namespace tolerance

std::vector<CheckResult> evaluate_checks(const McReport& report);

} // namespace reckern
