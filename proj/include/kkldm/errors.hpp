#pragma once

#include <stdexcept>
#include <string>

namespace kkldm {

/// Bad input: out-of-range parameters, malformed instances, schema violations.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A request that is well formed but exceeds a configured size, memory or range cap.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Process exit codes used by the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResourceLimit = 3;

}  // namespace kkldm
