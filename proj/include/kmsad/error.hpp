#pragma once

#include <stdexcept>
#include <string>

namespace kmsad {

// Invalid physical or algorithmic input (bad masses, n beyond a cap, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Integrator or quadrature did not reach the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kmsad
