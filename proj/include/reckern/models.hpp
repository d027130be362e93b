#pragma once

#include "reckern/estimator.hpp"
#include "reckern/numeric.hpp"
#include "reckern/validation.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace reckern {

enum class RegressionShape
{
  linear,    // r(x) = a + b sum_j x_j
  quadratic, // r(x) = sum_j x_j^2
  sine       // r(x) = sum_j sin(x_j)
};

std::string to_string(RegressionShape shape);
RegressionShape regression_shape_from_name(std::string_view name);

//! alpha_X(k) <= gamma k^{-rho}. Geometrically mixing processes carry
//! rho = +infinity since geometric decay dominates every polynomial rate.
struct MixingCertificate
{
  double gamma;
  double rho;

  bool geometric() const;
};

//! E exp(lambda |m(Y_0)|^theta) < infinity.
struct MomentCertificate
{
  double lambda;
  double theta;
};

//! Parameters of the simulated process: d independent stationary Gaussian
//! AR(1) coordinates X_t = rho_ar X_{t-1} + sqrt(1 - rho_ar^2) eps_t and
//! Y_t = r(X_t) + noise_sd e_t.
struct Ar1Process
{
  double rho_ar;
  double noise_sd;
  RegressionShape shape;
};

//! Analytic ground truth of a stationary process (X_t, Y_t) with m = identity.
struct ModelTruth
{
  using Scalar = std::function<double(std::span<const double>)>;
  using Vector = std::function<Eigen::VectorXd(std::span<const double>)>;
  using Matrix = std::function<Eigen::MatrixXd(std::span<const double>)>;

  std::string name;
  std::size_t dim{ 1 };

  Scalar density;
  Vector density_gradient;
  Matrix density_hessian;

  Scalar regression;
  Vector regression_gradient;
  Matrix regression_hessian;

  //! V(x) = E[m^2(Y) | X = x] - r^2(x)
  Scalar conditional_variance;

  MixingCertificate mixing{ 1.0, 0.0 };
  MomentCertificate moment{ 0.0, 0.0 };

  //! Present for models that StreamSampler can simulate.
  std::optional<Ar1Process> process;

  //! grad ln f = grad f / f. Throws DomainError where f(x) = 0.
  Eigen::VectorXd log_density_gradient(std::span<const double> x) const;
};

//! Gaussian AR(1) model with standard normal stationary marginals, in
//! dimension 1 or 2 (independent coordinates). noise_sd = 0 is accepted here
//! so that validation can reject the degenerate V = 0 case.
ModelTruth make_ar1_model(double rho_ar,
                          double noise_sd,
                          RegressionShape shape,
                          std::size_t dim = 1);

inline constexpr double linear_intercept = 1.0;
inline constexpr double linear_slope = 0.5;
inline constexpr std::uint64_t burn_in_steps = 1000;

struct Observation
{
  Point x;
  double y;
};

//! Deterministic stream of observations from a model's process.
class StreamSampler
{
public:
  StreamSampler(const ModelTruth& model, std::uint64_t seed);

  //! Writes the next observation into x (resized to dim) and y.
  void next(Point& x, double& y);
  Observation next();
  std::vector<Observation> sample(std::size_t count);

private:
  const ModelTruth* model_;
  Ar1Process process_;
  double innovation_sd_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{ 0.0, 1.0 };
  Point state_;
};

//! H3(i) mixing rate, H4(i) positivity of V and f on the grid, H4(ii) moment
//! certificate and the truncation level delta > 2 / lambda.
ValidationReport validate_h3_h4(const ModelTruth& model, const EstimatorConfig& config);

} // namespace reckern
