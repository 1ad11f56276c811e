#pragma once

#include <stdexcept>
#include <string>

namespace awpri {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: weights, indicator specs, windows, CLI options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a precondition (duplicates, gaps, missing series).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A statistic or estimator is undefined for the supplied data.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace awpri
