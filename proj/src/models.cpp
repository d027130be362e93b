#include "reckern/models.hpp"

#include "reckern/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace reckern {

namespace {

constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

void
check_dim(std::span<const double> x, std::size_t dim)
{
  if (x.size() != dim)
    throw ArgumentError("model evaluated at a point of dimension " +
                        std::to_string(x.size()) + ", expected " +
                        std::to_string(dim));
}

double
std_normal_product(std::span<const double> x)
{
  double sq = 0.0;
  for (double v : x)
    sq += v * v;
  return std::pow(inv_sqrt_2pi, static_cast<double>(x.size())) * std::exp(-0.5 * sq);
}

Eigen::VectorXd
as_vector(std::span<const double> x)
{
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j)
    v(static_cast<Eigen::Index>(j)) = x[j];
  return v;
}

} // namespace

std::string
to_string(RegressionShape shape)
{
  switch (shape) {
    case RegressionShape::linear:
      return "linear";
    case RegressionShape::quadratic:
      return "quadratic";
    case RegressionShape::sine:
      return "sine";
  }
  return "unknown";
}

RegressionShape
regression_shape_from_name(std::string_view name)
{
  if (name == "linear")
    return RegressionShape::linear;
  if (name == "quadratic")
    return RegressionShape::quadratic;
  if (name == "sine")
    return RegressionShape::sine;
  throw ArgumentError("unknown regression '" + std::string(name) +
                      "' (expected linear | quadratic | sine)");
}

bool
MixingCertificate::geometric() const
{
  return std::isinf(rho) && rho > 0.0;
}

Eigen::VectorXd
ModelTruth::log_density_gradient(std::span<const double> x) const
{
  const double f = density(x);
  if (!(f > 0.0))
    throw DomainError("ln f is undefined where f(x) = 0");
  return density_gradient(x) / f;
}

ModelTruth
make_ar1_model(double rho_ar, double noise_sd, RegressionShape shape, std::size_t dim)
{
  if (!(std::abs(rho_ar) < 1.0))
    throw ArgumentError("AR(1) coefficient must satisfy |rho_ar| < 1");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd))
    throw ArgumentError("noise_sd must be a nonnegative finite number");
  if (dim != 1 && dim != 2)
    throw ArgumentError("AR(1) models are provided for d = 1 and d = 2");

  ModelTruth model;
  model.name = "ar1-" + to_string(shape);
  model.dim = dim;
  model.process = Ar1Process{ rho_ar, noise_sd, shape };

  model.density = [dim](std::span<const double> x) {
    check_dim(x, dim);
    return std_normal_product(x);
  };
  model.density_gradient = [dim](std::span<const double> x) -> Eigen::VectorXd {
    check_dim(x, dim);
    return -std_normal_product(x) * as_vector(x);
  };
  model.density_hessian = [dim](std::span<const double> x) -> Eigen::MatrixXd {
    check_dim(x, dim);
    const Eigen::VectorXd v = as_vector(x);
    const auto n = static_cast<Eigen::Index>(dim);
    return std_normal_product(x) * (v * v.transpose() - Eigen::MatrixXd::Identity(n, n));
  };

  const auto n = static_cast<Eigen::Index>(dim);
  switch (shape) {
    case RegressionShape::linear:
      model.regression = [dim](std::span<const double> x) {
        check_dim(x, dim);
        double s = 0.0;
        for (double v : x)
          s += v;
        return linear_intercept + linear_slope * s;
      };
      model.regression_gradient = [dim, n](std::span<const double> x) -> Eigen::VectorXd {
        check_dim(x, dim);
        return Eigen::VectorXd::Constant(n, linear_slope);
      };
      model.regression_hessian = [dim, n](std::span<const double> x) -> Eigen::MatrixXd {
        check_dim(x, dim);
        return Eigen::MatrixXd::Zero(n, n);
      };
      break;
    case RegressionShape::quadratic:
      model.regression = [dim](std::span<const double> x) {
        check_dim(x, dim);
        double s = 0.0;
        for (double v : x)
          s += v * v;
        return s;
      };
      model.regression_gradient = [dim](std::span<const double> x) -> Eigen::VectorXd {
        check_dim(x, dim);
        return 2.0 * as_vector(x);
      };
      model.regression_hessian = [dim, n](std::span<const double> x) -> Eigen::MatrixXd {
        check_dim(x, dim);
        return 2.0 * Eigen::MatrixXd::Identity(n, n);
      };
      break;
    case RegressionShape::sine:
      model.regression = [dim](std::span<const double> x) {
        check_dim(x, dim);
        double s = 0.0;
        for (double v : x)
          s += std::sin(v);
        return s;
      };
      model.regression_gradient = [dim](std::span<const double> x) -> Eigen::VectorXd {
        check_dim(x, dim);
        return as_vector(x).array().cos().matrix();
      };
      model.regression_hessian = [dim](std::span<const double> x) -> Eigen::MatrixXd {
        check_dim(x, dim);
        return (-as_vector(x).array().sin()).matrix().asDiagonal();
      };
      break;
  }

  const double variance = noise_sd * noise_sd;
  model.conditional_variance = [dim, variance](std::span<const double> x) {
    check_dim(x, dim);
    return variance;
  };

  // Gaussian AR(1) with |rho_ar| < 1 is geometrically alpha-mixing.
  model.mixing = { 1.0, std::numeric_limits<double>::infinity() };

  const double d = static_cast<double>(dim);
  switch (shape) {
    case RegressionShape::linear: {
      // Y Gaussian: E exp(lambda Y^2) < inf iff lambda < 1 / (2 Var Y).
      const double var_y = linear_slope * linear_slope * d + variance;
      model.moment = { 1.0 / (4.0 * var_y), 2.0 };
      break;
    }
    case RegressionShape::sine:
      // |Y| <= d + noise_sd |e|, so Y^2 <= 2 d^2 + 2 noise_sd^2 e^2.
      model.moment = { variance > 0.0 ? 1.0 / (8.0 * variance) : 1.0, 2.0 };
      break;
    case RegressionShape::quadratic:
      // sum x_j^2 is chi-square: exponential tails, any lambda < 1/2.
      model.moment = { 0.4, 1.0 };
      break;
  }
  return model;
}

StreamSampler::StreamSampler(const ModelTruth& model, std::uint64_t seed)
  : model_(&model)
  , engine_(seed)
{
  if (!model.process)
    throw ArgumentError("model '" + model.name + "' has no simulatable process");
  process_ = *model.process;
  innovation_sd_ = std::sqrt(1.0 - process_.rho_ar * process_.rho_ar);
  state_.resize(model.dim);
  for (auto& v : state_)
    v = normal_(engine_);
  for (std::uint64_t step = 0; step < burn_in_steps; ++step)
    for (auto& v : state_)
      v = process_.rho_ar * v + innovation_sd_ * normal_(engine_);
}

void
StreamSampler::next(Point& x, double& y)
{
  for (auto& v : state_)
    v = process_.rho_ar * v + innovation_sd_ * normal_(engine_);
  x = state_;
  y = model_->regression(state_) + process_.noise_sd * normal_(engine_);
}

Observation
StreamSampler::next()
{
  Observation obs;
  next(obs.x, obs.y);
  return obs;
}

std::vector<Observation>
StreamSampler::sample(std::size_t count)
{
  if (count == 0)
    throw ArgumentError("sample count must be >= 1");
  std::vector<Observation> out(count);
  for (auto& obs : out)
    next(obs.x, obs.y);
  return out;
}

ValidationReport
validate_h3_h4(const ModelTruth& model, const EstimatorConfig& config)
{
  ValidationReport report;
  const double d = static_cast<double>(model.dim);

  if (model.dim != config.dim()) {
    report.add("dimension", CheckLevel::fail,
               "model has d = " + std::to_string(model.dim) + ", estimator has d = " +
                 std::to_string(config.dim()));
    return report;
  }

  const double required = std::max(2.0, (d + 2.0) / 2.0);
  if (model.mixing.geometric()) {
    report.add("H3(i) alpha-mixing rate", CheckLevel::pass,
               "geometric mixing dominates k^{-rho} for every rho > " +
                 format_double(required));
  } else if (model.mixing.rho > required) {
    report.add("H3(i) alpha-mixing rate", CheckLevel::pass,
               "rho = " + format_double(model.mixing.rho) + " > " + format_double(required));
  } else {
    report.add("H3(i) alpha-mixing rate", CheckLevel::fail,
               "rho = " + format_double(model.mixing.rho) + " must exceed max(2, (d+2)/2) = " +
                 format_double(required));
  }
  report.add("H3(ii) pairwise densities", CheckLevel::note,
             "bounded for Gaussian AR(1); not computed");

  if (config.transform.name() != "identity") {
    report.add("transform", CheckLevel::fail,
               "model truth is defined for m = identity, got '" +
                 config.transform.name() + "'");
  }

  bool positive = true;
  std::ostringstream where;
  for (const auto& x : config.grid) {
    const double f = model.density(x);
    const double v = model.conditional_variance(x);
    if (!(f > 0.0) || !(v > 0.0)) {
      positive = false;
      where << " x=(";
      for (std::size_t j = 0; j < x.size(); ++j)
        where << (j ? "," : "") << format_double(x[j]);
      where << ") f=" << format_double(f) << " V=" << format_double(v);
    }
  }
  if (positive)
    report.add("H4(i) V and f bounded away from zero", CheckLevel::pass,
               "f(x) > 0 and V(x) > 0 on all " + std::to_string(config.grid.size()) +
                 " grid points");
  else
    report.add("H4(i) V and f bounded away from zero", CheckLevel::fail,
               "degenerate at" + where.str());

  if (model.moment.lambda > 0.0 && model.moment.theta > 0.0)
    report.add("H4(ii) exponential moment", CheckLevel::pass,
               "lambda = " + format_double(model.moment.lambda) +
                 ", theta = " + format_double(model.moment.theta));
  else
    report.add("H4(ii) exponential moment", CheckLevel::fail, "no moment certificate");

  if (config.truncation) {
    const double bound = 2.0 / model.moment.lambda;
    if (model.moment.lambda > 0.0 && config.truncation->delta > bound)
      report.add("H4(ii) truncation level", CheckLevel::pass,
                 "delta = " + format_double(config.truncation->delta) + " > 2/lambda = " +
                   format_double(bound));
    else
      report.add("H4(ii) truncation level", CheckLevel::fail,
                 "delta = " + format_double(config.truncation->delta) +
                   " must exceed 2/lambda = " + format_double(bound));
    if (config.truncation->theta != model.moment.theta)
      report.add("H4(ii) truncation exponent", CheckLevel::note,
                 "truncation theta = " + format_double(config.truncation->theta) +
                   " differs from certificate theta = " +
                   format_double(model.moment.theta));
  }
  report.add("H4(iii) joint densities", CheckLevel::note,
             "holds analytically for Gaussian AR(1); not computed");
  return report;
}

} // namespace reckern
