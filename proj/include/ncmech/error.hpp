#pragma once

#include <stdexcept>
#include <string>

namespace ncmech {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible dimensions (variable counts, matrix sizes, tuple lengths).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An exact-rational value met a double-float value.
class ModeError : public Error {
 public:
  using Error::Error;
};

/// A monomial exponent exceeded Polynomial::max_degree.
class DegreeOverflow : public Error {
 public:
  using Error::Error;
};

/// Index or order outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition (non-antisymmetric theta, dt <= 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A linear system or bracket structure is degenerate at the evaluated point.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// Integration produced a NaN or infinity.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncmech
