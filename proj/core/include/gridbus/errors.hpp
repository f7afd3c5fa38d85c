#pragma once

#include <stdexcept>
#include <string>

namespace gridbus {

// Exit-code mapping used by the CLI: ConfigError -> 1, ValidationError -> 2,
// NumericError -> 3.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& m) : std::runtime_error(m) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace gridbus
