#pragma once

#include <stdexcept>
#include <string>

namespace axibie {

/// Argument outside the mathematical domain of an operation (t outside [0,T],
/// chi <= 1, modulus >= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid user-facing configuration: bad parameter combination, unreadable
/// curve file, x0 outside the curve, ...
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: singular modal system, coincident kernel points,
/// non-convergent adaptive integration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace axibie
