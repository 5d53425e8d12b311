#pragma once

#include <stdexcept>

namespace thetacf {

/// Argument outside the mathematical domain of an operation (x outside [0, θ],
/// inverse of zero, digit below m, mismatched fields).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller-supplied configuration or data that fails validation.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Floating-point failure that should not happen (overflow, unexpected zero).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thetacf
