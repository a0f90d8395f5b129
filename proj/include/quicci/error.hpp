#pragma once

#include <stdexcept>
#include <string>

namespace quicci {

/// Error type thrown by all library operations (IO failures, malformed
/// inputs, contract violations such as dimension mismatches).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace quicci
