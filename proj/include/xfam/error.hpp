#pragma once

#include <stdexcept>
#include <string>

namespace xfam {

/// Caller passed an argument outside an operation's domain.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size or search cap was hit before the operation could finish.
class ResourceCap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing or unusable configuration (e.g. no verified UXS for a bound).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xfam
