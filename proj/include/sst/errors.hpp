#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sst {

enum class ErrorCode {
  Syntax,
  UnknownSymbol,
  CopylessViolation,
  VariableMismatch,
  InvalidRun,
  NotAccepting,
  BudgetExceeded,
  InvalidArgument,
  MissingParameter,
  NotIdempotent,
  InputMismatch,
  OutputMismatch,
  OverlappingLoops,
  NotASolution,
  EmptySystem,
  AlphabetMismatch,
};

const char* to_string(ErrorCode code) noexcept;

/// Base error for every failure raised by the library. The code is stable
/// and is what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the SST text parser; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column,
             const std::string& message)
      : Error(code, "line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace sst
