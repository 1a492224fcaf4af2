#pragma once

#include <stdexcept>
#include <string>

namespace sagin {

/// A formula was evaluated outside the region where it is real-valued
/// (negative radicand, arcsin argument beyond [-1, 1], log singularity).
class NumericalDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent scenario/configuration input.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(where) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace sagin
