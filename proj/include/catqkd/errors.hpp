#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace catqkd {

/// An argument lies outside the range an operation accepts.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state cannot be normalized (zero or near-zero norm).
class DegenerateStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The input is well formed but has no physical counterpart
/// (e.g. a visibility below the overlap floor).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Session configuration rejected; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace catqkd
