#include "reckern/validation.hpp"

#include <sstream>

namespace reckern {

bool
ValidationReport::ok() const
{
  for (const auto& check : checks)
    if (check.level == CheckLevel::fail)
      return false;
  return true;
}

void
ValidationReport::add(std::string id, CheckLevel level, std::string detail)
{
  checks.push_back({ std::move(id), level, std::move(detail) });
}

void
ValidationReport::append(const ValidationReport& other)
{
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool
ValidationReport::has(const std::string& id, CheckLevel level) const
{
  for (const auto& check : checks)
    if (check.id == id && check.level == level)
      return true;
  return false;
}

std::string
to_string(CheckLevel level)
{
  switch (level) {
    case CheckLevel::pass:
      return "PASS";
    case CheckLevel::note:
      return "NOTE";
    case CheckLevel::fail:
      return "FAIL";
  }
  return "?";
}

std::string
ValidationReport::str() const
{
  std::ostringstream out;
  for (const auto& check : checks)
    out << "[" << to_string(check.level) << "] " << check.id << ": "
        << check.detail << "\n";
  return out.str();
}

} // namespace reckern
