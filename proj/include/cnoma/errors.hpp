#pragma once

#include <stdexcept>
#include <string>

namespace cnoma {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A value violates a type invariant or an operation precondition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Channel realization breaks the g1 > g2 ordering the optimizer relies on.
class InfeasibleChannel : public Error {
public:
  using Error::Error;
};

class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// Leading coefficient of a quadratic vanished where a root was requested.
class DivisionDegenerate : public NumericalFailure {
public:
  using NumericalFailure::NumericalFailure;
};

/// An integrand returned NaN or infinity inside the integration range.
class NonFiniteSample : public NumericalFailure {
public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace cnoma
