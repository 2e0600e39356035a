#pragma once

#include <stdexcept>
#include <string>

namespace cc {

/// Bad user input: malformed files, out-of-range parameters, missing paths.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A documented invariant of the library was violated at runtime.
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cc
