#pragma once

#include <stdexcept>
#include <string>

namespace infent {

/// Raised when an operand violates a documented precondition
/// (non-normal input to the functional calculus, non-density state, ...).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for malformed arguments: bad factor index, dimension mismatch,
/// parameters outside their domain.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operator would exceed the configured entry cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Raised when a requested tolerance is below the analytic truncation tail.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for operations that are deliberately unsupported on a given input.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace infent
