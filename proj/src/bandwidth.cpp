#include "reckern/bandwidth.hpp"

#include "reckern/errors.hpp"

#include <cmath>
#include <sstream>

namespace reckern {

BandwidthSchedule::BandwidthSchedule(double c, double nu, std::size_t dim, double ell)
  : BandwidthSchedule(nullptr, c, nu, dim, ell)
{}

BandwidthSchedule::BandwidthSchedule(ConstantSequence c_n,
                                     double c,
                                     double nu,
                                     std::size_t dim,
                                     double ell)
  : c_n_(std::move(c_n))
  , c_(c)
  , nu_(nu)
  , dim_(dim)
  , ell_(ell)
{
  if (!(c > 0.0) || !std::isfinite(c))
    throw ArgumentError("bandwidth constant c must be positive and finite");
  if (!std::isfinite(nu))
    throw ArgumentError("bandwidth exponent nu must be finite");
  if (dim == 0)
    throw ArgumentError("dimension must be positive");
  if (!(ell >= 0.0 && ell <= 1.0))
    throw ArgumentError("ell must lie in [0, 1]");
}

double
BandwidthSchedule::h(std::uint64_t n) const
{
  if (n == 0)
    throw ArgumentError("bandwidth index n must be >= 1");
  const double scale = c_n_ ? c_n_(n) : c_;
  return scale * std::pow(static_cast<double>(n), -nu_);
}

double
BandwidthSchedule::b_nr(std::uint64_t n, double r) const
{
  if (n == 0)
    throw ArgumentError("B_{n,r} needs n >= 1");
  if (r == 0.0)
    return 1.0;
  const double hn = h(n);
  CompensatedSum sum;
  for (std::uint64_t i = 1; i <= n; ++i)
    sum += std::pow(h(i) / hn, r);
  return sum.value() / static_cast<double>(n);
}

double
BandwidthSchedule::beta_limit(double r) const
{
  const double nu_r = nu_ * r;
  if (nu_r >= 1.0)
    throw DivergenceError("beta_r diverges: nu * r = " + std::to_string(nu_r) +
                          " >= 1");
  return 1.0 / (1.0 - nu_r);
}

double
BandwidthSchedule::density_exponent() const
{
  return static_cast<double>(dim_) * (1.0 - ell_);
}

double
BandwidthSchedule::variance_exponent() const
{
  return static_cast<double>(dim_) * (1.0 - 2.0 * ell_);
}

double
BandwidthSchedule::bias_exponent() const
{
  return density_exponent() + 2.0;
}

bool
BandwidthSchedule::bias_cancels() const
{
  const double d = static_cast<double>(dim_);
  return nu_ > 1.0 / (d + 4.0) && nu_ < 1.0 / (d + 2.0);
}

ValidationReport
validate_h2(const BandwidthSchedule& schedule)
{
  ValidationReport report;
  const double d = static_cast<double>(schedule.dim());
  const double nu = schedule.nu();
  std::ostringstream msg;

  if (nu > 0.0 && nu < 1.0) {
    report.add("H2(i) h_n decreasing to 0", CheckLevel::pass,
               "0 < nu = " + format_double(nu) + " < 1");
  } else {
    report.add("H2(i) h_n decreasing to 0", CheckLevel::fail,
               "nu = " + format_double(nu) + " outside (0, 1)");
  }

  // n h_n^{d+2} = c^{d+2} n^{1 - nu (d+2)}
  const double growth = 1.0 - nu * (d + 2.0);
  msg << "n h_n^{d+2} ~ n^" << format_double(growth);
  if (growth > 0.0) {
    msg << " -> infinity (nu < 1/(d+2) = " << format_double(1.0 / (d + 2.0)) << ")";
    report.add("H2(i) n h_n^{d+2} -> infinity", CheckLevel::pass, msg.str());
  } else {
    msg << " does not diverge (needs nu < 1/(d+2) = "
        << format_double(1.0 / (d + 2.0)) << ")";
    report.add("H2(i) n h_n^{d+2} -> infinity", CheckLevel::fail, msg.str());
  }

  if (nu > 0.0 && nu * (d + 2.0) < 1.0) {
    report.add("H2(ii) B_{n,r} -> beta_r", CheckLevel::pass,
               "nu r < 1 for every r <= d+2; beta_{d+2} = " +
                 format_double(schedule.beta_limit(d + 2.0)));
  } else {
    report.add("H2(ii) B_{n,r} -> beta_r", CheckLevel::fail,
               "beta_{d+2} does not exist (nu (d+2) >= 1) or nu <= 0");
  }

  std::string regular = "holds analytically for power-law h_n";
  if (schedule.ell() > 0.5)
    regular += " (not needed for ell > 1/2)";
  report.add("H2(iii) h_{u_n} ~ h_{v_n}", CheckLevel::pass, regular);

  report.add("log-bandwidth condition", CheckLevel::pass,
             "(ln n)^{1/theta} h_n^p -> 0 for all p > 0 holds for power-law h_n");

  if (schedule.bias_cancels()) {
    report.add("bias cancellation regime", CheckLevel::note,
               "1/(d+4) < nu < 1/(d+2): n h_n^{d+4} -> 0, B_n may be dropped");
  }
  return report;
}

RunningBandwidthSums::RunningBandwidthSums(double density_exponent,
                                           std::vector<double> diagnostic_exponents)
  : density_exponent_(density_exponent)
{
  for (double r : diagnostic_exponents)
    s_r_.emplace(r, CompensatedSum{});
}

void
RunningBandwidthSums::update(double h)
{
  ++n_;
  last_h_ = h;
  s_den_ += std::pow(h, density_exponent_);
  for (auto& [r, sum] : s_r_)
    sum += std::pow(h, r);
}

double
RunningBandwidthSums::s_r(double r) const
{
  if (r == density_exponent_)
    return s_den();
  auto it = s_r_.find(r);
  if (it == s_r_.end())
    throw ArgumentError("exponent " + format_double(r) + " is not tracked");
  return it->second.value();
}

double
RunningBandwidthSums::b_nr(double r) const
{
  if (n_ == 0)
    throw ArgumentError("B_{n,r} needs n >= 1");
  return s_r(r) / (static_cast<double>(n_) * std::pow(last_h_, r));
}

} // namespace reckern
