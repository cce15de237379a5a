#pragma once

#include <stdexcept>
#include <string>

namespace ocal {

// Base of every error raised by the library. The subclasses mirror the error
// kinds callers are expected to distinguish (the CLI maps them to exit codes).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (CSV rows, JSON documents).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input whose values fall outside the accepted vocabulary.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Parsed data that violates a structural requirement (too few rows, no targets).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Invalid user-supplied parameters: fold counts, rotations, grids, nu.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Programming-contract violation: mismatched dimensions, unknown ids.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Non-finite values reaching a numeric routine.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A metric evaluated where it is undefined (e.g. BACC without outliers).
class MetricError : public Error {
 public:
  using Error::Error;
};

// The label source could not answer.
class OracleError : public Error {
 public:
  using Error::Error;
};

}  // namespace ocal
