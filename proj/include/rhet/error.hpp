#pragma once

#include <stdexcept>
#include <string>

namespace rhet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed covariate schema, e.g. a correlation matrix that is not PSD.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data that violates an operation's preconditions. CLI exit code 1.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A calibration search that could not reach its target.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace rhet
