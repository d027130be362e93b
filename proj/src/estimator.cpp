#include "reckern/estimator.hpp"

#include "reckern/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace reckern {

namespace {

double
first_component(std::span<const double> y)
{
  if (y.size() != 1)
    throw ArgumentError("transform expects a scalar response, got " +
                        std::to_string(y.size()) + " components");
  return y[0];
}

struct CustomRegistry
{
  std::mutex mutex;
  std::map<std::string, ResponseTransform::Function, std::less<>> functions;
};

CustomRegistry&
registry()
{
  static CustomRegistry instance;
  return instance;
}

} // namespace

ResponseTransform
ResponseTransform::identity()
{
  return { "identity", [](std::span<const double> y) { return first_component(y); } };
}

ResponseTransform
ResponseTransform::square()
{
  return { "square", [](std::span<const double> y) {
            const double v = first_component(y);
            return v * v;
          } };
}

ResponseTransform
ResponseTransform::by_name(std::string_view name)
{
  if (name == "identity")
    return identity();
  if (name == "square")
    return square();
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  auto it = reg.functions.find(name);
  if (it == reg.functions.end())
    throw ArgumentError("unknown transform '" + std::string(name) + "'");
  return { std::string(name), it->second };
}

void
ResponseTransform::register_custom(const std::string& name, Function fn)
{
  if (name == "identity" || name == "square")
    throw ArgumentError("transform name '" + name + "' is reserved");
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  reg.functions[name] = std::move(fn);
}

double
Truncation::threshold(std::uint64_t i) const
{
  const double index = static_cast<double>(std::max<std::uint64_t>(i, 2));
  return std::pow(delta * std::log(index), 1.0 / theta);
}

void
EstimatorConfig::validate() const
{
  if (grid.empty())
    throw ConfigError("evaluation grid is empty");
  if (schedule.dim() != kernel.dim())
    throw ConfigError("bandwidth schedule and kernel disagree on dimension");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].size() != dim())
      throw ConfigError("grid point " + std::to_string(i) + " has dimension " +
                        std::to_string(grid[i].size()) + ", expected " +
                        std::to_string(dim()));
    for (std::size_t j = 0; j < i; ++j)
      if (grid[i] == grid[j])
        throw ConfigError("grid points " + std::to_string(j) + " and " +
                          std::to_string(i) + " coincide");
  }
  if (truncation && !(truncation->delta > 0.0 && truncation->theta > 0.0))
    throw ConfigError("truncation needs delta > 0 and theta > 0");
}

std::size_t
EstimatorConfig::grid_index(std::span<const double> x) const
{
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::equal(grid[i].begin(), grid[i].end(), x.begin(), x.end()))
      return i;
  throw ArgumentError("point is not on the evaluation grid");
}

RecursiveEstimator::RecursiveEstimator(EstimatorConfig config)
  : config_(std::move(config))
  , state_{ 0, RunningBandwidthSums(config_.schedule.density_exponent()), {}, {}, {}, 0 }
{
  config_.validate();
  const auto size = config_.grid.size();
  state_.num.resize(size);
  state_.den.resize(size);
  if (config_.truncation)
    state_.num_trunc.resize(size);
}

void
RecursiveEstimator::update(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != config_.dim())
    throw ArgumentError("observation x has dimension " + std::to_string(x.size()) +
                        ", expected " + std::to_string(config_.dim()));
  const double response = config_.transform(y);
  const std::uint64_t i = state_.n + 1;
  const double h = config_.schedule.h(i);
  const double d = static_cast<double>(config_.dim());
  const double weight = std::pow(h, -d * config_.ell());

  bool keep = true;
  if (config_.truncation) {
    keep = std::abs(response) <= config_.truncation->threshold(i);
    if (!keep)
      ++state_.trunc_exceed_count;
  }

  for (std::size_t g = 0; g < config_.grid.size(); ++g) {
    const double k = config_.kernel.eval_scaled(config_.grid[g], x, h);
    if (k == 0.0)
      continue;
    const double wk = weight * k;
    state_.den[g] += wk;
    state_.num[g] += response * wk;
    if (config_.truncation && keep)
      state_.num_trunc[g] += response * wk;
  }
  state_.sums.update(h);
  state_.n = i;
}

void
RecursiveEstimator::require_observations() const
{
  if (state_.n == 0)
    throw DomainError("estimator has no observations yet");
}

double
RecursiveEstimator::f_hat(std::size_t index) const
{
  require_observations();
  return state_.den.at(index).value() / state_.sums.s_den();
}

double
RecursiveEstimator::phi_hat(std::size_t index) const
{
  require_observations();
  return state_.num.at(index).value() / state_.sums.s_den();
}

double
RecursiveEstimator::phi_tilde(std::size_t index) const
{
  if (!config_.truncation)
    throw ConfigError("phi_tilde requires truncation (delta, theta) to be configured");
  require_observations();
  return state_.num_trunc.at(index).value() / state_.sums.s_den();
}

std::optional<double>
RecursiveEstimator::r_hat(std::size_t index, Evaluation mode) const
{
  require_observations();
  const double den = state_.den.at(index).value();
  if (den == 0.0)
    return std::nullopt;
  if (mode == Evaluation::truncated) {
    if (!config_.truncation)
      throw ConfigError("truncated evaluation requires truncation to be configured");
    return state_.num_trunc.at(index).value() / den;
  }
  return state_.num.at(index).value() / den;
}

} // namespace reckern
