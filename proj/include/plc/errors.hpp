#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace plc {

enum class ErrorKind {
  DuplicateDeclaration,
  UndeclaredVariable,
  TypeMismatch,
  SyntaxError,
  UnknownOpcode,
  UnboundLabel,
  UnbalancedParen,
  TypeError,
  DivisionByZero,
  FuelExhausted,
  NoInitialStep,
  MultipleInitialSteps,
  DanglingReference,
  AmbiguousPriority,
  DeclarationMismatch,
  StateExplosion,
  UnsupportedDomain,
};

const char* to_string(ErrorKind kind);

// Every failure in the toolkit carries a machine-checkable kind plus a
// human-readable detail; parse errors also carry a 1-based source line.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string detail);
  Error(ErrorKind kind, int line, std::string detail);

  ErrorKind kind() const { return kind_; }
  std::optional<int> line() const { return line_; }

private:
  ErrorKind kind_;
  std::optional<int> line_;
};

}  // namespace plc
