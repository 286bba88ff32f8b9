#pragma once

#include <stdexcept>
#include <string>

namespace imblab {

/// Invalid configuration: bad parameter values, unresolvable model names,
/// degenerate inputs the caller could have checked. CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Broken data: missing files, parse failures, inconsistent manifests.
/// CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace imblab
