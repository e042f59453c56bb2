#pragma once

#include <stdexcept>
#include <string>

namespace gfcd {

/// Invalid scenario or policy configuration (K > N, eps outside [0,1], ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Loss of positive definiteness or another numerical breakdown.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gfcd
