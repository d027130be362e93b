#pragma once

#include <string>
#include <vector>

namespace reckern {

enum class CheckLevel
{
  pass,
  note, // informational, never fails the report
  fail
};

struct AssumptionCheck
{
  std::string id;     // e.g. "H2(i)"
  CheckLevel level;
  std::string detail;
};

struct ValidationReport
{
  std::vector<AssumptionCheck> checks;

  bool ok() const;
  void add(std::string id, CheckLevel level, std::string detail);
  void append(const ValidationReport& other);
  bool has(const std::string& id, CheckLevel level) const;
  std::string str() const;
};

std::string to_string(CheckLevel level);

} // namespace reckern
