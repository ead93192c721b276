#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace yp {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input value: a bad term, a record that breaks the schema, a
// precondition on an argument.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Syntax error in query text or a data file. Positions are 1-based; a column
// of 0 means the position within the line is unknown.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace yp
