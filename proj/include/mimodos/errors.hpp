#pragma once

#include <stdexcept>
#include <string>

namespace mimodos {

// Base for everything thrown by this library. The CLI maps each subclass to a
// distinct exit code, so keep the taxonomy small and stable.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid user-supplied configuration (bad flag value, bad config-file line,
// unachievable calibration target, inconsistent compound reward, ...).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// The fixed-point solve could not produce a valid threshold (no sign change,
// degenerate reward structure).
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& msg) : Error(msg) {}
};

// Filesystem failures while writing results.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace mimodos
