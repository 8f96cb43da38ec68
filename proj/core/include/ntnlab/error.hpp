#pragma once

#include <stdexcept>
#include <string>

namespace ntn {

/// Invalid configuration value or combination. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested link does not exist (satellite below the horizon).
class NoServingLink : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& what) {
  if (!condition) throw ConfigError(what);
}

}  // namespace detail
}  // namespace ntn
