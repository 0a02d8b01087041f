#pragma once

#include <stdexcept>

namespace gridmon {

/// Invalid user-supplied configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken caller-side precondition. The CLI maps this to exit code 3.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed wire bytes.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gridmon
