#ifndef NERKIT_ERROR_H_
#define NERKIT_ERROR_H_

#include <stdexcept>
#include <string>

namespace nerkit {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` and `column` are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, size_t line, size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  size_t line() const { return line_; }
  size_t column() const { return column_; }

 private:
  size_t line_;
  size_t column_;
};

// An entity type name outside the fixed inventory.
class UnknownTypeError : public Error {
 public:
  explicit UnknownTypeError(std::string value, const std::string& where = "")
      : Error((where.empty() ? "" : where + ": ") + "unknown entity type '" + value + "'"),
        value_(std::move(value)) {}

  const std::string& value() const { return value_; }

 private:
  std::string value_;
};

// Structurally invalid data handed to an operation that requires valid data.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Model file problems: corruption, version or template mismatch.
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace nerkit

#endif  // NERKIT_ERROR_H_
