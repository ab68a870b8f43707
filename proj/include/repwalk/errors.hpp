#pragma once

#include <stdexcept>
#include <string>

namespace repwalk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds a hard enumeration or sampling budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Mismatched dimensions between a path, a spec or an observable.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// NaN/inf appeared where a finite number is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a structural contract (e.g. non-nested interaction sets).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Configuration failed validation; the CLI maps this to exit status 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace repwalk
