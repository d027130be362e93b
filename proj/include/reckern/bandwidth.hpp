#pragma once

#include "reckern/validation.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "reckern/numeric.hpp"

namespace reckern {

//! Power-law bandwidth sequence h_n = C_n n^{-nu}, with C_n = c by default.
//!
//! The schedule also carries the estimator family parameter ell so that the
//! exponents d(1 - ell), d(1 - 2 ell) and d(1 - ell) + 2 used throughout the
//! asymptotic formulas are derived in one place.
class BandwidthSchedule
{
public:
  using ConstantSequence = std::function<double(std::uint64_t)>;

  BandwidthSchedule(double c, double nu, std::size_t dim, double ell);

  //! General C_n (must be nonincreasing towards c > 0). Only c itself enters
  //! the limit constants.
  BandwidthSchedule(ConstantSequence c_n, double c, double nu, std::size_t dim, double ell);

  double c() const { return c_; }
  double nu() const { return nu_; }
  std::size_t dim() const { return dim_; }
  double ell() const { return ell_; }

  double h(std::uint64_t n) const;

  //! B_{n,r} = (1/n) sum_{i<=n} (h_i / h_n)^r by direct summation.
  double b_nr(std::uint64_t n, double r) const;

  //! beta_r = 1 / (1 - nu r). Throws DivergenceError if nu r >= 1.
  double beta_limit(double r) const;

  double density_exponent() const;  // d(1 - ell)
  double variance_exponent() const; // d(1 - 2 ell)
  double bias_exponent() const;     // d(1 - ell) + 2

  //! 1/(d+4) < nu < 1/(d+2): n h_n^{d+4} -> 0 so the bias term vanishes.
  bool bias_cancels() const;

private:
  ConstantSequence c_n_;
  double c_;
  double nu_;
  std::size_t dim_;
  double ell_;
};

ValidationReport validate_h2(const BandwidthSchedule& schedule);

//! Streaming partial sums of h_i^r for a fixed set of exponents.
class RunningBandwidthSums
{
public:
  explicit RunningBandwidthSums(double density_exponent,
                                std::vector<double> diagnostic_exponents = {});

  void update(double h);

  std::uint64_t n() const { return n_; }
  //! sum_{i<=n} h_i^{d(1-ell)}
  double s_den() const { return s_den_.value(); }
  //! sum_{i<=n} h_i^r for a registered diagnostic exponent.
  double s_r(double r) const;
  //! B_{n,r} from the running sum and the current bandwidth.
  double b_nr(double r) const;

private:
  std::uint64_t n_{ 0 };
  double density_exponent_;
  double last_h_{ 0.0 };
  CompensatedSum s_den_;
  std::map<double, CompensatedSum> s_r_;
};

} // namespace reckern
