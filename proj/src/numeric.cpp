#include "reckern/numeric.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace reckern {

void
CompensatedSum::add(double value)
{
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

std::uint64_t
mix_seed(std::uint64_t value)
{
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

std::uint64_t
derive_seed(std::uint64_t master_seed, std::uint64_t replicate)
{
  return mix_seed(mix_seed(master_seed) ^ mix_seed(replicate + 0x632be59bd9b4e019ULL));
}

std::string
format_double(double value)
{
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

} // namespace reckern
