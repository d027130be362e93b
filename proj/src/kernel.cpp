#include "reckern/kernel.hpp"

#include "reckern/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace reckern {

namespace {

constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

double
univariate_l2(KernelFamily family)
{
  switch (family) {
    case KernelFamily::gaussian:
      return 0.5 * std::numbers::inv_sqrtpi;
    case KernelFamily::epanechnikov:
      return 0.6;
  }
  throw ArgumentError("unsupported kernel family");
}

double
univariate_variance(KernelFamily family)
{
  switch (family) {
    case KernelFamily::gaussian:
      return 1.0;
    case KernelFamily::epanechnikov:
      return 0.2;
  }
  throw ArgumentError("unsupported kernel family");
}

} // namespace

std::string
to_string(KernelFamily family)
{
  switch (family) {
    case KernelFamily::gaussian:
      return "gaussian";
    case KernelFamily::epanechnikov:
      return "epanechnikov";
  }
  return "unknown";
}

KernelFamily
kernel_family_from_name(std::string_view name)
{
  if (name == "gaussian")
    return KernelFamily::gaussian;
  if (name == "epanechnikov")
    return KernelFamily::epanechnikov;
  throw ArgumentError("unknown kernel '" + std::string(name) +
                      "' (expected gaussian | epanechnikov)");
}

Kernel::Kernel(KernelFamily family, std::size_t dim)
  : family_(family)
  , dim_(dim)
{
  if (dim == 0)
    throw ArgumentError("kernel dimension must be positive");
  l2_norm_sq_ = std::pow(univariate_l2(family), static_cast<double>(dim));
  second_moment_ = univariate_variance(family) *
                   Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                             static_cast<Eigen::Index>(dim));
}

Kernel
Kernel::from_name(std::string_view name, std::size_t dim)
{
  return Kernel(kernel_family_from_name(name), dim);
}

double
Kernel::support_radius() const
{
  return family_ == KernelFamily::epanechnikov
           ? 1.0
           : std::numeric_limits<double>::infinity();
}

double
Kernel::univariate(double u) const
{
  switch (family_) {
    case KernelFamily::gaussian:
      return inv_sqrt_2pi * std::exp(-0.5 * u * u);
    case KernelFamily::epanechnikov:
      return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
  }
  return 0.0;
}

double
Kernel::eval(std::span<const double> u) const
{
  if (u.size() != dim_)
    throw ArgumentError("kernel argument has dimension " +
                        std::to_string(u.size()) + ", expected " +
                        std::to_string(dim_));
  if (family_ == KernelFamily::gaussian) {
    double sq = 0.0;
    for (double component : u)
      sq += component * component;
    return std::pow(inv_sqrt_2pi, static_cast<double>(dim_)) * std::exp(-0.5 * sq);
  }
  double value = 1.0;
  for (double component : u) {
    value *= univariate(component);
    if (value == 0.0)
      break;
  }
  return value;
}

double
Kernel::eval_scaled(std::span<const double> x,
                    std::span<const double> center,
                    double h) const
{
  if (x.size() != dim_ || center.size() != dim_)
    throw ArgumentError("kernel argument dimension mismatch");
  if (family_ == KernelFamily::gaussian) {
    // one exp for the whole product
    double sq = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double u = (x[j] - center[j]) / h;
      sq += u * u;
    }
    return std::pow(inv_sqrt_2pi, static_cast<double>(dim_)) * std::exp(-0.5 * sq);
  }
  double value = 1.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    value *= univariate((x[j] - center[j]) / h);
    if (value == 0.0)
      break;
  }
  return value;
}

KernelConstants
constants(const Kernel& kernel)
{
  return { kernel.l2_norm_sq(), kernel.second_moment() };
}

} // namespace reckern
