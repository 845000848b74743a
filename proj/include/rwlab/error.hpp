#pragma once

#include <stdexcept>
#include <string>

namespace rwlab {

// Base of every error raised by the library. The CLI maps ConfigError to
// exit code 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unknown configuration: bad law name, invalid law file,
// invalid command-line parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation (negative start, t <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied table or window is too small for the request.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Quadrature or root finding did not reach the requested accuracy.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A table violates one of its defining identities (e.g. V not harmonic).
class TableInconsistency : public Error {
 public:
  using Error::Error;
};

// Conditioning event of probability zero.
class UnreachableError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace rwlab
