#include "reckern/asymptotics.hpp"

#include "reckern/errors.hpp"

#include <cmath>

namespace reckern {

double
bias_functional(const Eigen::MatrixXd& hessian, const Kernel& kernel)
{
  const auto& moment = kernel.second_moment();
  if (hessian.rows() != moment.rows() || hessian.cols() != moment.cols())
    throw ArgumentError("Hessian is " + std::to_string(hessian.rows()) + "x" +
                        std::to_string(hessian.cols()) + ", kernel dimension is " +
                        std::to_string(kernel.dim()));
  return 0.5 * hessian.cwiseProduct(moment).sum();
}

double
bias_ratio(const BandwidthSchedule& schedule)
{
  return schedule.beta_limit(schedule.bias_exponent()) /
         schedule.beta_limit(schedule.density_exponent());
}

double
variance_ratio(const BandwidthSchedule& schedule)
{
  const double den = schedule.beta_limit(schedule.density_exponent());
  return schedule.beta_limit(schedule.variance_exponent()) / (den * den);
}

Eigen::MatrixXd
phi_hessian(const ModelTruth& model, std::span<const double> x)
{
  const double f = model.density(x);
  const double r = model.regression(x);
  const Eigen::VectorXd grad_f = model.density_gradient(x);
  const Eigen::VectorXd grad_r = model.regression_gradient(x);
  return f * model.regression_hessian(x) + grad_f * grad_r.transpose() +
         grad_r * grad_f.transpose() + r * model.density_hessian(x);
}

double
density_bias(const ModelTruth& model, const Kernel& kernel, std::span<const double> x)
{
  return bias_functional(model.density_hessian(x), kernel);
}

double
phi_bias(const ModelTruth& model, const Kernel& kernel, std::span<const double> x)
{
  return bias_functional(phi_hessian(model, x), kernel);
}

double
bias_Bn(const ModelTruth& model,
        const EstimatorConfig& config,
        std::span<const double> x,
        std::uint64_t n)
{
  if (!(model.density(x) > 0.0))
    throw DomainError("B_n requires f(x) > 0");
  const Eigen::VectorXd grad_log_f = model.log_density_gradient(x);
  const Eigen::VectorXd grad_r = model.regression_gradient(x);
  const Eigen::MatrixXd bracket =
    model.regression_hessian(x) + 2.0 * grad_log_f * grad_r.transpose();
  const double h = config.schedule.h(n);
  return h * h * bias_ratio(config.schedule) * bias_functional(bracket, config.kernel);
}

double
sigma_sq_ell(const ModelTruth& model,
             const EstimatorConfig& config,
             std::span<const double> x)
{
  const double f = model.density(x);
  if (!(f > 0.0))
    throw DomainError("sigma_ell^2 requires f(x) > 0");
  return variance_ratio(config.schedule) * f * config.kernel.l2_norm_sq();
}

double
limit_sd(double variance_ratio, double l2_norm_sq, double f, double v)
{
  const double sigma_sq = variance_ratio * f * l2_norm_sq;
  return std::sqrt(sigma_sq * v / (f * f));
}

CltParams
clt_params(const ModelTruth& model,
           const EstimatorConfig& config,
           std::span<const double> x,
           std::uint64_t n,
           BiasTerm bias)
{
  const double f = model.density(x);
  const double v = model.conditional_variance(x);
  if (!(f > 0.0))
    throw DomainError("CLT parameters require f(x) > 0");
  if (!(v > 0.0))
    throw DomainError("CLT parameters require V(x) > 0");
  if (bias == BiasTerm::cancel && !config.schedule.bias_cancels())
    throw DomainError("bias term may only be dropped when 1/(d+4) < nu < 1/(d+2)");

  CltParams params{};
  params.sigma_sq = sigma_sq_ell(model, config, x);
  params.bias_cancelled = bias == BiasTerm::cancel;
  params.bias_bn = params.bias_cancelled ? 0.0 : bias_Bn(model, config, x, n);
  params.sd_limit =
    limit_sd(variance_ratio(config.schedule), config.kernel.l2_norm_sq(), f, v);
  const double h = config.schedule.h(n);
  params.scale =
    std::sqrt(static_cast<double>(n) * std::pow(h, static_cast<double>(config.dim())));
  return params;
}

double
plugin_sd(const RecursiveEstimator& estimator, std::size_t grid_index, double v_estimate)
{
  const double f_hat = estimator.f_hat(grid_index);
  if (!(f_hat > 0.0))
    throw DomainError("plug-in sd requires f_n(x) > 0");
  if (!(v_estimate > 0.0))
    throw DomainError("plug-in sd requires a positive variance estimate");
  const auto& config = estimator.config();
  return limit_sd(variance_ratio(config.schedule), config.kernel.l2_norm_sq(), f_hat,
                  v_estimate);
}

} // namespace reckern
