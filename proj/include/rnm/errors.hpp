#pragma once

#include <stdexcept>

namespace rnm {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched atom counts or fiber dimensions between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented range of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A family of sets fails to cover the atoms disjointly.
class PartitionError : public Error {
 public:
  using Error::Error;
};

/// A stated precondition does not hold for the given values.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Operation undefined for this combination (e.g. ball projection with q != 2).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A certificate sequence fails to converge at the declared horizon.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A map failed the piecewise well-definedness spot check.
class SigmaStabilityError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rnm
