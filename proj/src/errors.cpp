#include "plc/errors.hpp"

namespace plc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrorKind::UndeclaredVariable: return "UndeclaredVariable";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownOpcode: return "UnknownOpcode";
    case ErrorKind::UnboundLabel: return "UnboundLabel";
    case ErrorKind::UnbalancedParen: return "UnbalancedParen";
    case ErrorKind::TypeError: return "TypeError";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::NoInitialStep: return "NoInitialStep";
    case ErrorKind::MultipleInitialSteps: return "MultipleInitialSteps";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::AmbiguousPriority: return "AmbiguousPriority";
    case ErrorKind::DeclarationMismatch: return "DeclarationMismatch";
    case ErrorKind::StateExplosion: return "StateExplosion";
    case ErrorKind::UnsupportedDomain: return "UnsupportedDomain";
  }
  return "UnknownError";
}

namespace {

std::string format_message(ErrorKind kind, std::optional<int> line, const std::string& detail) {
  std::string msg = to_string(kind);
  if (line) {
    msg += " at line ";
    msg += std::to_string(*line);
  }
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}

}  // namespace

Error::Error(ErrorKind kind, std::string detail)
    : std::runtime_error(format_message(kind, std::nullopt, detail)), kind_(kind) {}

Error::Error(ErrorKind kind, int line, std::string detail)
    : std::runtime_error(format_message(kind, line, detail)), kind_(kind), line_(line) {}

}  // namespace plc
