#ifndef JETS_ERROR_HPP
#define JETS_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jets {

/// Domain error categories. The names double as the machine-readable
/// category strings reported by the command-line tool.
enum class ErrorKind {
  InvalidArgument,
  SignatureMismatch,
  OrderViolation,
  EmptySystem,
  EmptyProjection,
  NonLinearSystem,
  SymbolNotCoefficientOnly,
  SingularMatrix,
  MissingAssignment,
  MaxIterationsExceeded,
  DeltaSingularUnresolved,
  InconsistentAtPoint,
  InconsistentSeed,
  InconsistentOrder,
  ParseError,
  IoError,
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::EmptySystem: return "EmptySystem";
    case ErrorKind::EmptyProjection: return "EmptyProjection";
    case ErrorKind::NonLinearSystem: return "NonLinearSystem";
    case ErrorKind::SymbolNotCoefficientOnly: return "SymbolNotCoefficientOnly";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::MissingAssignment: return "MissingAssignment";
    case ErrorKind::MaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorKind::DeltaSingularUnresolved: return "DeltaSingularUnresolved";
    case ErrorKind::InconsistentAtPoint: return "InconsistentAtPoint";
    case ErrorKind::InconsistentSeed: return "InconsistentSeed";
    case ErrorKind::InconsistentOrder: return "InconsistentOrder";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view category() const noexcept { return to_string(kind_); }

 private:
  ErrorKind kind_;
};

/// Raised by the series solver when the affine system at some order has no
/// solution; `order()` is the first order at which this was detected.
class InconsistentOrderError : public Error {
 public:
  InconsistentOrderError(std::size_t order, const std::string& what)
      : Error(ErrorKind::InconsistentOrder, what), order_(order) {}
  std::size_t order() const noexcept { return order_; }

 private:
  std::size_t order_;
};

/// Lexical or syntax error with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(ErrorKind::ParseError, std::to_string(line) + ":" +
                                         std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

}  // namespace jets

#endif  // JETS_ERROR_HPP
