#pragma once

#include "reckern/bandwidth.hpp"
#include "reckern/kernel.hpp"
#include "reckern/numeric.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reckern {

//! The statistician's transformation m applied to the response Y.
class ResponseTransform
{
public:
  using Function = std::function<double(std::span<const double>)>;

  static ResponseTransform identity();
  static ResponseTransform square();
  //! "identity", "square" or any name passed to register_custom.
  static ResponseTransform by_name(std::string_view name);
  static void register_custom(const std::string& name, Function fn);

  const std::string& name() const { return name_; }
  double operator()(std::span<const double> y) const { return fn_(y); }

private:
  ResponseTransform(std::string name, Function fn)
    : name_(std::move(name))
    , fn_(std::move(fn))
  {}

  std::string name_;
  Function fn_;
};

//! Logarithmic truncation level b_i = (delta ln i)^{1/theta}.
struct Truncation
{
  double delta;
  double theta;

  //! Level applied online to observation i; ln(max(i, 2)) so that the first
  //! observation is not always discarded.
  double threshold(std::uint64_t i) const;
};

struct EstimatorConfig
{
  Kernel kernel;
  BandwidthSchedule schedule;
  std::vector<Point> grid;
  std::optional<Truncation> truncation;
  ResponseTransform transform = ResponseTransform::identity();

  double ell() const { return schedule.ell(); }
  std::size_t dim() const { return kernel.dim(); }

  //! Throws ConfigError on empty/duplicate grid, dimension disagreement or
  //! non-positive truncation parameters.
  void validate() const;

  //! Position of x in the grid. Throws ArgumentError if absent.
  std::size_t grid_index(std::span<const double> x) const;
};

//! Running sums behind f_n, phi_n, phi~_n and r_n at every grid point:
//!   den(x)       = sum_i h_i^{-d ell} K((x - X_i)/h_i)
//!   num(x)       = sum_i m(Y_i) h_i^{-d ell} K((x - X_i)/h_i)
//!   num_trunc(x) = same as num restricted to |m(Y_i)| <= b_i
struct RecursiveState
{
  std::uint64_t n{ 0 };
  RunningBandwidthSums sums;
  std::vector<CompensatedSum> num;
  std::vector<CompensatedSum> den;
  std::vector<CompensatedSum> num_trunc;
  std::uint64_t trunc_exceed_count{ 0 };
};

enum class Evaluation
{
  plain,
  truncated
};

//! Recursive kernel regression estimator r_n^ell on a fixed evaluation grid.
//!
//! ell = 0 gives the Ahmad-Lin estimator, ell = 1 the Devroye-Wagner one.
//! Each update costs O(grid size), independent of n. Updates must be applied
//! in stream order because h_i depends on the index i.
class RecursiveEstimator
{
public:
  explicit RecursiveEstimator(EstimatorConfig config);

  void update(std::span<const double> x, std::span<const double> y);
  void update(std::span<const double> x, double y)
  {
    update(x, std::span<const double>(&y, 1));
  }

  const EstimatorConfig& config() const { return config_; }
  const RecursiveState& state() const { return state_; }
  std::uint64_t n() const { return state_.n; }
  std::size_t grid_size() const { return config_.grid.size(); }

  double f_hat(std::size_t index) const;
  double phi_hat(std::size_t index) const;
  //! Throws ConfigError when truncation is disabled.
  double phi_tilde(std::size_t index) const;
  //! num/den, or std::nullopt where den(x) = 0.
  std::optional<double> r_hat(std::size_t index,
                              Evaluation mode = Evaluation::plain) const;

  double f_hat(std::span<const double> x) const { return f_hat(config_.grid_index(x)); }
  double phi_hat(std::span<const double> x) const { return phi_hat(config_.grid_index(x)); }
  double phi_tilde(std::span<const double> x) const
  {
    return phi_tilde(config_.grid_index(x));
  }
  std::optional<double> r_hat(std::span<const double> x,
                              Evaluation mode = Evaluation::plain) const
  {
    return r_hat(config_.grid_index(x), mode);
  }

private:
  void require_observations() const;

  EstimatorConfig config_;
  RecursiveState state_;
};

} // namespace reckern
