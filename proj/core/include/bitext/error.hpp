#pragma once

#include <stdexcept>
#include <string>

namespace bitext {

// Base of every exception thrown by the library. Subclasses name the failure
// category so callers (and the CLI exit-code mapping) can dispatch on type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input validation failures: the caller supplied something unusable.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UsageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class VocabularyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptyInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IntegrityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A dataset cannot be divided as requested (folds, stratification).
class PartitionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Runtime failures: inputs were acceptable but the computation failed.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class EvaluationError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class ConvergenceError : public RuntimeFailure {
 public:
  ConvergenceError(const std::string& what, long iterations)
      : RuntimeFailure(what), iterations_(iterations) {}
  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

class FittingError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class SamplingError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class UndefinedSimilarityError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class UndefinedCorrelationError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class IoError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

}  // namespace bitext
