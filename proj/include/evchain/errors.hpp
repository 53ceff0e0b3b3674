#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evchain {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Anything wrong with an input dataset. The CLI maps this family to exit 2.
class DatasetError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DatasetError {
 public:
  ParseError(std::string file, std::size_t line, std::string reason)
      : DatasetError(file + ":" + std::to_string(line) + ": " + reason),
        file_(std::move(file)),
        line_(line),
        reason_(std::move(reason)) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string reason_;
};

class ManifestError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

class ReferenceError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

class ProbabilityError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

class CoverageError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

class MissingLinkError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

class MissingMassError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class EmptyChoiceError : public Error {
 public:
  using Error::Error;
};

class ModeMissingError : public Error {
 public:
  using Error::Error;
};

class EmptyError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace evchain
