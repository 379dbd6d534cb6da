#pragma once

#include <stdexcept>
#include <string>

namespace trispin {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition or shape violation (bad site index, dimension mismatch, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed: non-convergence, negative density-matrix
/// eigenvalue, non-perturbative regime.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace trispin
