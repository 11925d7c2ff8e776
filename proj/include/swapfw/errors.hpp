#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swapfw {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NegativeWeight : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

class EmptyActiveSet : public Error {
 public:
  EmptyActiveSet() : Error("descent search over an empty active set") {}
};

class StepOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidProblem : public Error {
 public:
  using Error::Error;
};

class DegenerateData : public Error {
 public:
  using Error::Error;
};

class EmptyDataset : public Error {
 public:
  EmptyDataset() : Error("dataset contains no examples") {}
};

class FormatVersionMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed input; line is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NonIncreasingIndex : public ParseError {
 public:
  explicit NonIncreasingIndex(std::size_t line)
      : ParseError(line, "feature indices must be strictly increasing") {}
};

}  // namespace swapfw
