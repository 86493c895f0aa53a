#pragma once

#include <stdexcept>
#include <string>

namespace ouvg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, inputs or configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the region where a function is finite or defined:
/// exponential-moment domains, branch cuts, gamma poles.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The Esscher measure for the requested market price of risk does not exist.
class MeasureError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Dampening parameters outside their admissible strip.
class DampeningError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Numerical failure: non-convergence, grids too narrow, rank deficiency.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ouvg
