#ifndef SYMBREAK_ERROR_HPP
#define SYMBREAK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace symbreak {

enum class ErrorKind {
  ParseError,
  UnsupportedRuleType,
  CardinalityDuplicate,
  UnexpandedRule,
  TautologyPresent,
  NotTight,
  TooLarge,
  OverlappingCycles,
  MalformedCycle,
  SupportTooLarge,
  ClosureTooLarge,
  DuplicateEdge,
  SearchBudgetExceeded,
  InconsistentProjection,
  NotASymmetry,
  IdentityPermutation,
  NonBinaryConstraint,
  InvalidArgument,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnsupportedRuleType: return "UnsupportedRuleType";
    case ErrorKind::CardinalityDuplicate: return "CardinalityDuplicate";
    case ErrorKind::UnexpandedRule: return "UnexpandedRule";
    case ErrorKind::TautologyPresent: return "TautologyPresent";
    case ErrorKind::NotTight: return "NotTight";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::OverlappingCycles: return "OverlappingCycles";
    case ErrorKind::MalformedCycle: return "MalformedCycle";
    case ErrorKind::SupportTooLarge: return "SupportTooLarge";
    case ErrorKind::ClosureTooLarge: return "ClosureTooLarge";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorKind::InconsistentProjection: return "InconsistentProjection";
    case ErrorKind::NotASymmetry: return "NotASymmetry";
    case ErrorKind::IdentityPermutation: return "IdentityPermutation";
    case ErrorKind::NonBinaryConstraint: return "NonBinaryConstraint";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// All library failures are reported through this exception; `kind()` lets
/// callers (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Parse failures carry the offending (1-based) line.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& reason)
      : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace symbreak

#endif
