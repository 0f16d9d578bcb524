#pragma once

#include <stdexcept>
#include <string>

namespace wl1 {

/// A closed-form quantity was asked for outside its mathematical domain
/// (e.g. a negative radicand).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The request is well-formed but too large for an exhaustive method.
class UnsupportedSize : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A recovery condition required by a bound does not hold.
class ConditionViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input files or configuration.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wl1
