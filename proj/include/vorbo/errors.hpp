#pragma once

#include <stdexcept>
#include <string>

namespace vorbo {

/// A caller broke a documented precondition (bad dimension, empty input, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Unknown names, unsupported dimensions and other invalid settings.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The GP kernel matrix could not be factorized even after jitter escalation.
class SurrogateFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace vorbo
