#pragma once

#include <stdexcept>
#include <string>

namespace freeact {

// Base for all recoverable library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A window, search or operator would exceed a configured size cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// Caller handed in something outside the operation's contract
// (element not in window, arity mismatch, inconsistent demand, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A certification step could not be completed (e.g. acl indeterminate,
// uncertified set passed to a separation routine).
class CertificationFailure : public Error {
 public:
  using Error::Error;
};

// Malformed configuration or persisted artifact.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace freeact
