#pragma once

#include <stdexcept>
#include <string>

namespace icheck {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: syntax errors, arity clashes, unsafe clauses,
// vocabulary violations, missing instantiations.
struct InputError : Error {
  using Error::Error;
};

struct ParseError : InputError {
  using InputError::InputError;
};

// A predicate is unknown or used with an inconsistent arity.
struct VocabularyError : InputError {
  using InputError::InputError;
};

// A clause violates the range-restriction (safety) condition.
struct SafetyError : InputError {
  using InputError::InputError;
};

// The rule set has a cycle through negation.
struct NotStratifiableError : InputError {
  using InputError::InputError;
};

// A parameterized value was used where a ground one is required.
struct InstantiationError : InputError {
  using InputError::InputError;
};

// The request is outside the supported fragment (recursive views in the
// simplifier, update kinds a construction cannot handle).
struct UnsupportedError : InputError {
  using InputError::InputError;
};

// An enumeration or expansion budget was exceeded.
struct ResourceError : Error {
  using Error::Error;
};

}  // namespace icheck
