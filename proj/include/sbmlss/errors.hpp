#pragma once

#include <stdexcept>
#include <string>

namespace sbmlss {

// Base for every error the library raises. The CLI maps subclasses to exit
// codes (parameter/config -> 2, numerical -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model or statistic parameters (probabilities outside [0,1], t >= 1
// where the contiguous regime is required, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Centering with p in {0,1}: the scale n p (1-p) vanishes.
class DegenerateCenteringError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// A function evaluated outside its domain, e.g. sigma(t) for t >= 1.
class DomainError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// A correction mode used where it is not defined (ExactSmall beyond T_6).
class ModeError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Brute-force enumeration would exceed its work guard.
class ComplexityError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Growth conditions leave no admissible polynomial degree.
class RegimeTooSparseError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Malformed configuration, CLI input or graph file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Solver failure. Never swallowed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sbmlss
