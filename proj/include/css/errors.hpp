#pragma once

#include <stdexcept>
#include <string>

namespace css {

// Bad argument: out-of-range index, invalid probability, dimension mismatch.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Structurally valid input on which the operation cannot proceed,
// e.g. an all-zero sampling distribution.
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  explicit ParseError(const std::string& what) : ParseError(what, 0) {}
  long line() const { return line_; }

 private:
  long line_ = 0;
};

// Unsupported binary/file format (e.g. unknown PGM magic number).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace css
