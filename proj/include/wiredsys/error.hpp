#pragma once

#include <stdexcept>
#include <string>

namespace wiredsys {

/// Raised when an operation's preconditions are violated (interface
/// mismatches, out-of-range ports, type errors on values).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wiredsys
