#pragma once

#include <stdexcept>
#include <string>

namespace leastgrad {

/// Base of all library errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: shapes, configs, out-of-domain indices, non-binary sets.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Grids that do not share a geometry.
class DimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidShapeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidMetricError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// NaNs, root-finder or CG breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace leastgrad
