#pragma once

#include <stdexcept>
#include <string>

namespace kerchain {

/// Malformed input: unknown symbol, bad grammar, radius mismatch, trivial element.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A construction would exceed the configured size limits or overflow an exponent.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of a completion request cannot be met (e.g. avoided word already in the subgroup).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kerchain
