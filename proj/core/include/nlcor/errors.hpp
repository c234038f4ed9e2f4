// errors.hpp
// Exception taxonomy shared by the library and the CLI. The CLI maps these
// onto process exit codes (usage 2, validation 3, numeric 4).

#pragma once

#include <stdexcept>

namespace nlcor {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (CSV structure, unparsable cell, ...).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Zero-variance / zero-entropy input where a statistic is undefined.
class DegenerateInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Not enough samples for the requested computation.
class InsufficientDataError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A numeric routine failed to converge or produced non-finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Command line / config file misuse (CLI layer only).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlcor
