#pragma once

#include <stdexcept>
#include <string>

namespace sdl {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range caller input (exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

// A Cayley table that is not a group. The message names the failing triple.
class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

// The instance is beyond an exhaustive-search cap (exit code 3).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A self-verifying construction failed its own post-condition.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sdl
