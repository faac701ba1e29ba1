#pragma once

#include <stdexcept>
#include <string>

namespace ggmsim {

/// Raised for out-of-range sizes, unknown layouts and malformed configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a caller violates an operation's preconditions (bad site, wrong gate size).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state handed to a metric is not normalized.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The state produced by an operation has zero norm and cannot be normalized.
class DegenerateStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed CSV or config input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ggmsim
