#pragma once

#include <stdexcept>
#include <string>

namespace r2sf {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed element text, non-prime characteristic, mismatched contexts.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A family parameter violates the construction's constraint (norm, gcd, parity).
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

// The requested computation exceeds a configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed (a counting identity, a witness re-check).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace r2sf
