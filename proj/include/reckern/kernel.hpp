#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace reckern {

enum class KernelFamily
{
  gaussian,
  epanechnikov
};

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_name(std::string_view name);

//! Symmetric probability kernel on R^d, product form over coordinates.
//!
//! The integral constants consumed by the asymptotic formulas are computed in
//! closed form at construction: the squared L2 norm int K^2 and the second
//! moment matrix M_ij = int v_i v_j K(v) dv (diagonal for product kernels).
//! Instances are immutable.
class Kernel
{
public:
  Kernel(KernelFamily family, std::size_t dim);
  static Kernel from_name(std::string_view name, std::size_t dim);

  KernelFamily family() const { return family_; }
  std::size_t dim() const { return dim_; }
  double l2_norm_sq() const { return l2_norm_sq_; }
  const Eigen::MatrixXd& second_moment() const { return second_moment_; }

  //! Support radius in the sup norm; infinity for the Gaussian.
  double support_radius() const;

  //! K(u). Throws ArgumentError if u.size() != dim().
  double eval(std::span<const double> u) const;

  //! K((x - center) / h) without materializing the scaled vector.
  double eval_scaled(std::span<const double> x,
                     std::span<const double> center,
                     double h) const;

  //! The one-dimensional factor.
  double univariate(double u) const;

private:
  KernelFamily family_;
  std::size_t dim_;
  double l2_norm_sq_;
  Eigen::MatrixXd second_moment_;
};

struct KernelConstants
{
  double l2_norm_sq;
  Eigen::MatrixXd second_moment;
};

KernelConstants constants(const Kernel& kernel);

} // namespace reckern
