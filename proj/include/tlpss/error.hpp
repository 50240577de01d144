#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tlpss {

/// Bad user configuration (flags, config file, parameter ranges).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problems with the input data itself.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyDatasetError : public DataError {
 public:
  using DataError::DataError;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The split or candidate set leaves nothing to evaluate.
class EvaluationImpossible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tlpss
