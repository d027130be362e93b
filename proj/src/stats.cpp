#include "reckern/stats.hpp"

#include "reckern/errors.hpp"
#include "reckern/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace reckern::stats {

namespace {

// Acklam's rational approximation for the lower half, relative error ~1e-9.
double
quantile_guess(double p)
{
  static constexpr double a[] = { -3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00 };
  static constexpr double b[] = { -5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01 };
  static constexpr double c[] = { -7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00 };
  static constexpr double d[] = { 7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00 };
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double
lower_quantile(double p)
{
  // p <= 1/2: refine the guess with Halley steps on the cdf
  double x = quantile_guess(p);
  for (int step = 0; step < 2; ++step) {
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

std::vector<double>
mid_ranks(std::span<const double> values)
{
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{ 0 });
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]])
      ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

void
require_pair(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size())
    throw ArgumentError("paired samples differ in length");
  if (a.size() < 2)
    throw ArgumentError("at least two paired values are required");
}

} // namespace

double
normal_cdf(double t)
{
  return 0.5 * std::erfc(-t * std::numbers::sqrt2 * 0.5);
}

double
normal_quantile(double p)
{
  if (!(p > 0.0 && p < 1.0))
    throw ArgumentError("normal_quantile needs p in (0, 1)");
  if (p <= 0.5)
    return lower_quantile(p);
  return -lower_quantile(1.0 - p);
}

double
ks_critical_01(std::size_t n)
{
  return 1.628 / std::sqrt(static_cast<double>(n));
}

KsResult
ks_normal(std::span<const double> sample)
{
  if (sample.size() < ks_min_sample)
    throw ArgumentError("KS test needs at least " + std::to_string(ks_min_sample) +
                        " values, got " + std::to_string(sample.size()));
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = normal_cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    d = std::max({ d, above, below });
  }
  KsResult result;
  result.d_stat = d;
  result.n_eff = sorted.size();
  result.critical_01 = ks_critical_01(sorted.size());
  result.pass = d < result.critical_01;
  return result;
}

double
mean(std::span<const double> values)
{
  if (values.empty())
    throw ArgumentError("mean of an empty sample");
  CompensatedSum sum;
  for (double v : values)
    sum += v;
  return sum.value() / static_cast<double>(values.size());
}

double
variance(std::span<const double> values)
{
  return covariance(values, values);
}

double
covariance(std::span<const double> a, std::span<const double> b)
{
  require_pair(a, b);
  const double ma = mean(a);
  const double mb = mean(b);
  CompensatedSum sum;
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += (a[i] - ma) * (b[i] - mb);
  return sum.value() / static_cast<double>(a.size() - 1);
}

double
correlation(std::span<const double> a, std::span<const double> b)
{
  return covariance(a, b) / std::sqrt(variance(a) * variance(b));
}

double
spearman(std::span<const double> a, std::span<const double> b)
{
  require_pair(a, b);
  const auto ra = mid_ranks(a);
  const auto rb = mid_ranks(b);
  return correlation(ra, rb);
}

double
lag1_correlation(std::span<const double> values)
{
  if (values.size() < 3)
    throw ArgumentError("lag-1 correlation needs at least three values");
  return correlation(values.first(values.size() - 1), values.last(values.size() - 1));
}

} // namespace reckern::stats
