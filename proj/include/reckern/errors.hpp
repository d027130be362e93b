#pragma once

#include <stdexcept>
#include <string>

namespace reckern {

//! Bad argument shape or value (dimension mismatch, n = 0, unknown grid point).
class ArgumentError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//! A quantity requested where it is not defined, e.g. f(x) = 0.
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

//! A limit constant beta_r that does not exist because nu * r >= 1.
class DivergenceError : public DomainError
{
public:
  using DomainError::DomainError;
};

//! Invalid or inconsistent configuration.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Config text that could not be parsed; carries the 1-based line (0 if none).
class ParseError : public ConfigError
{
public:
  ParseError(const std::string& what, std::size_t line = 0)
    : ConfigError(line ? "line " + std::to_string(line) + ": " + what : what)
    , line_(line)
  {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

//! File-system or data-file failure.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace reckern
