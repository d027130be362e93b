#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace reckern {

using Point = std::vector<double>;

//! Neumaier-compensated running sum.
class CompensatedSum
{
public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init)
    : sum_(init)
  {}

  void add(double value);
  CompensatedSum& operator+=(double value)
  {
    add(value);
    return *this;
  }

  double value() const { return sum_ + compensation_; }

private:
  double sum_{ 0.0 };
  double compensation_{ 0.0 };
};

//! splitmix64 finalizer; used to derive independent replicate seeds.
std::uint64_t mix_seed(std::uint64_t value);

//! Seed of replicate `replicate` under `master_seed`, independent of run order.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replicate);

//! Shortest round-trip decimal text of `value` ("nan", "inf", "-inf" for
//! non-finite values). Locale independent.
std::string format_double(double value);

} // namespace reckern
