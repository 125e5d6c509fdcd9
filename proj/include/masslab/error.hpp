#pragma once

#include <stdexcept>
#include <string>

namespace masslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, solver or model configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Sample arrays whose length does not match the grid.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (t <= 0, zero field, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Field dimension or model kind incompatible with the requested operation.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// An iterative or shooting solver failed to produce a result.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A result was produced but fails its accuracy certificate.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during a computation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A family construction lost mass off the end of the grid.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace masslab
