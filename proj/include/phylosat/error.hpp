#pragma once

#include <stdexcept>
#include <string>

namespace phylosat {

enum class ErrorKind {
  ModulusMismatch,
  NonZeroSum,
  LeafCountMismatch,
  TallyMismatch,
  DegreeMismatch,
  NotNormalized,
  InternalContradiction,
  IterationLimit,
  BudgetExceeded,
  Exhausted,
  InvalidTree,
  Malformed,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ModulusMismatch: return "ModulusMismatch";
    case ErrorKind::NonZeroSum: return "NonZeroSum";
    case ErrorKind::LeafCountMismatch: return "LeafCountMismatch";
    case ErrorKind::TallyMismatch: return "TallyMismatch";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::InternalContradiction: return "InternalContradiction";
    case ErrorKind::IterationLimit: return "IterationLimit";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::Exhausted: return "Exhausted";
    case ErrorKind::InvalidTree: return "InvalidTree";
    case ErrorKind::Malformed: return "Malformed";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace phylosat
