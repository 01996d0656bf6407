#pragma once

#include <stdexcept>
#include <string>

namespace aispath {

/// A configuration value is missing, malformed or violates its invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data cannot be used (malformed records, degenerate windows, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coordinates outside the valid latitude/longitude ranges.
class ValidationError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace aispath
