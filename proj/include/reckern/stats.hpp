#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace reckern::stats {

double normal_cdf(double t);

//! Inverse of normal_cdf. Throws ArgumentError unless 0 < p < 1.
double normal_quantile(double p);

//! Asymptotic 1% critical value of the one-sample KS statistic.
double ks_critical_01(std::size_t n);

struct KsResult
{
  double d_stat;
  std::size_t n_eff;
  double critical_01;
  bool pass; // d_stat < critical_01
};

inline constexpr std::size_t ks_min_sample = 20;

//! One-sample Kolmogorov-Smirnov test against the fully specified N(0, 1).
//! Throws ArgumentError for fewer than ks_min_sample values.
KsResult ks_normal(std::span<const double> sample);

double mean(std::span<const double> values);
//! Unbiased (n - 1) variance; needs at least two values.
double variance(std::span<const double> values);
//! Unbiased (n - 1) covariance.
double covariance(std::span<const double> a, std::span<const double> b);
double correlation(std::span<const double> a, std::span<const double> b);
//! Pearson correlation of mid-ranks.
double spearman(std::span<const double> a, std::span<const double> b);
//! Correlation between consecutive entries.
double lag1_correlation(std::span<const double> values);

} // namespace reckern::stats
