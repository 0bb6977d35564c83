#pragma once

#include <stdexcept>
#include <string>

namespace finmodel {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: shape mismatches, mixed fields, bad files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition or property does not hold
/// (d^2 != 0, non-minimal input, map is not a chain map, ...).
class PropertyError : public Error {
 public:
  using Error::Error;
};

/// Internal consistency check failed. Indicates a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace finmodel
