#pragma once

#include <stdexcept>
#include <string>

namespace pird {

/// Broad error classes. The CLI maps them to exit codes 2, 3 and 4.
enum class ErrorKind { usage, data, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// usage: the caller asked for something outside an operation's domain
class SizeError : public Error {
 public:
  explicit SizeError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class IncompleteInputError : public Error {
 public:
  explicit IncompleteInputError(const std::string& what)
      : Error(ErrorKind::usage, what) {}
};

// data: the input itself is unusable
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, long line)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  long line() const noexcept { return line_; }

 private:
  long line_;
};

class EstimationError : public DataError {
 public:
  using DataError::DataError;
};

// numerical: the model or spectrum is degenerate
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

class StabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateSpectrumError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pird
