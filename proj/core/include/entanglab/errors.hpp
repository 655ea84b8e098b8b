#pragma once

#include <stdexcept>
#include <string>

namespace entanglab {

/// Raised when a request exceeds a hard size gate (state dimension,
/// eigensolver memory, enumeration width). The message names the
/// limiting dimension.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by experiment-config parsing; the message names the offending
/// field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entanglab
