#pragma once

#include <stdexcept>
#include <string>

namespace pminimal {

enum class ErrorKind {
  kPrecisionExhausted,
  kNotInValuationRing,
  kDivisionByZero,
  kFieldMismatch,
  kHenselConditionFailed,
  kUnsupportedPolynomial,
  kValuationOfZero,
  kUnsupportedDegree,
  kInvalidArgument,
  kSyntax,
};

// Stable lowercase tag used in diagnostics, e.g. "precision-exhausted".
const char* error_tag(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_tag(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failure with a 1-based column into the input text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t column, const std::string& what)
      : Error(ErrorKind::kSyntax, "column " + std::to_string(column) + ": " + what),
        column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

}  // namespace pminimal
