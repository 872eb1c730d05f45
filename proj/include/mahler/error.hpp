#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mahler {

enum class ErrorKind {
  DivisionByZero,
  PoleAtEvaluationPoint,
  ZeroDivisor,
  ZeroSeries,
  UnknownLeadingTerm,
  PlanMismatch,
  NonRationalExponent,
  SyntaxError,
  NonRationalExponentLiteral,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::PoleAtEvaluationPoint: return "PoleAtEvaluationPoint";
    case ErrorKind::ZeroDivisor: return "ZeroDivisor";
    case ErrorKind::ZeroSeries: return "ZeroSeries";
    case ErrorKind::UnknownLeadingTerm: return "UnknownLeadingTerm";
    case ErrorKind::PlanMismatch: return "PlanMismatch";
    case ErrorKind::NonRationalExponent: return "NonRationalExponent";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::NonRationalExponentLiteral: return "NonRationalExponentLiteral";
  }
  return "Unknown";
}

// Every failure raised by the library carries a kind so callers (and the
// CLI's structured diagnostics) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse errors additionally remember where they happened (1-based).
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, const std::string& what, int line, int column)
      : Error(kind, what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace mahler
