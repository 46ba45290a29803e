#pragma once

#include <stdexcept>
#include <string>

namespace npvi {

// Invalid configuration: bad sizes, out-of-range settings, mismatched
// dimensions. The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller supplied an unusable input (empty sample list, non-finite start).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A model was asked for a derivative it does not provide.
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Numerical breakdown the engine cannot recover from. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace npvi
