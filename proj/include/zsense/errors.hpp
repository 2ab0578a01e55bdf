#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zsense {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by a caller-supplied value (empty block, ADC count
// out of range, non-finite feature...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Record timestamps must be strictly increasing within a stream.
class StreamOrderError : public Error {
 public:
  using Error::Error;
};

class InsufficientTraining : public Error {
 public:
  using Error::Error;
};

class InvalidScenario : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  // 1-based CSV column; 0 when the error concerns the whole line.
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace zsense
