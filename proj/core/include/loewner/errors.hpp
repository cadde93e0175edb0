#pragma once

#include <stdexcept>
#include <string>

namespace loewner {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input matrix is not square.
class NonSquareError : public Error {
 public:
  using Error::Error;
};

/// Input claimed Hermitian deviates from its adjoint beyond the gate.
class AsymmetryError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failed to converge or produced an invalid decomposition.
class EigensolverError : public Error {
 public:
  using Error::Error;
};

/// Matrix required to be positive definite has a non-positive eigenvalue.
class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

/// Scalar argument outside the function domain, or parameter out of range.
class DomainViolationError : public Error {
 public:
  using Error::Error;
};

/// Function used in a role its declared monotonicity class does not permit.
class ClassViolationError : public Error {
 public:
  using Error::Error;
};

class NotStrictlyPositiveError : public Error {
 public:
  using Error::Error;
};

class UnknownMeanError : public Error {
 public:
  using Error::Error;
};

/// Two algebraically equivalent computation routes disagreed beyond tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace loewner
