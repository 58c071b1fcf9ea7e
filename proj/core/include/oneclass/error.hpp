#pragma once

#include <stdexcept>
#include <string>

namespace oneclass {

// Base for every error the library raises. Command-line front ends map
// InvalidArgument to a usage failure and everything else to a runtime failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad hyperparameter or argument value (theta outside (0,1), sigma <= 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed or out-of-contract input data.
class DataError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public DataError {
 public:
  using DataError::DataError;
};

// Factorization failure, rank deficiency, or a non-finite intermediate.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace oneclass
