#pragma once

#include <stdexcept>
#include <string>

namespace grushin {

// Error hierarchy. The CLI maps these onto exit codes (see cli.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (lambda = 0, t <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise unusable sample data.
class DataError : public Error {
 public:
  using Error::Error;
};

// A symbol could not be evaluated (non-finite value, failing derivative).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Request exceeds what the grid or truncation can represent.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace grushin
