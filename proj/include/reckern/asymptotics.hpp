#pragma once

#include "reckern/estimator.hpp"
#include "reckern/kernel.hpp"
#include "reckern/models.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <span>

namespace reckern {

//! Limit law of sqrt(n h_n^d) (r_n(x) - r(x) - B_n): N(0, sd_limit^2).
struct CltParams
{
  double bias_bn;
  double sd_limit;
  double scale;    // sqrt(n h_n^d)
  double sigma_sq; // sigma_ell^2(x)
  bool bias_cancelled;
};

enum class BiasTerm
{
  include,
  cancel // only allowed when 1/(d+4) < nu < 1/(d+2)
};

//! b_h(x) = (1/2) sum_ij hessian_ij int v_i v_j K(v) dv
double bias_functional(const Eigen::MatrixXd& hessian, const Kernel& kernel);

//! beta_{d(1-ell)+2} / beta_{d(1-ell)}
double bias_ratio(const BandwidthSchedule& schedule);

//! beta_{d(1-2 ell)} / beta_{d(1-ell)}^2
double variance_ratio(const BandwidthSchedule& schedule);

//! Hessian of phi = r f by the product rule.
Eigen::MatrixXd phi_hessian(const ModelTruth& model, std::span<const double> x);

//! b_f(x) and b_phi(x) for the model.
double density_bias(const ModelTruth& model, const Kernel& kernel, std::span<const double> x);
double phi_bias(const ModelTruth& model, const Kernel& kernel, std::span<const double> x);

//! B_n = h_n^2 (beta ratio) (1/2) sum_ij (d2r/dx_i dx_j + 2 dln f/dx_i dr/dx_j) M_ij.
//! Throws DomainError where f(x) = 0.
double bias_Bn(const ModelTruth& model,
               const EstimatorConfig& config,
               std::span<const double> x,
               std::uint64_t n);

//! sigma_ell^2(x) = (beta_{d(1-2ell)} / beta_{d(1-ell)}^2) f(x) int K^2.
double sigma_sq_ell(const ModelTruth& model,
                    const EstimatorConfig& config,
                    std::span<const double> x);

CltParams clt_params(const ModelTruth& model,
                     const EstimatorConfig& config,
                     std::span<const double> x,
                     std::uint64_t n,
                     BiasTerm bias = BiasTerm::include);

//! Limit sd with f replaced by f_n^ell(x) everywhere it appears (including
//! inside sigma_ell^2) and V by the supplied estimate.
double plugin_sd(const RecursiveEstimator& estimator,
                 std::size_t grid_index,
                 double v_estimate);

//! sqrt(sigma^2 V / f^2) with sigma^2 = ratio * f * l2; shared by the oracle
//! and plug-in routes.
double limit_sd(double variance_ratio, double l2_norm_sq, double f, double v);

} // namespace reckern
