#pragma once

#include <stdexcept>
#include <string>

namespace toricwedge {

enum class ErrorKind {
  PreconditionViolated,
  DimensionMismatch,
  EmptyFamily,
  NotSquare,
  Unbounded,
  TooFewRays,
  NotPrimitive,
  NotUnimodular,
  DuplicateRay,
  BadWinding,
  NotBlowDownable,
  NoOppositeRay,
  InvalidPuzzle,
  NotWedged,
  LabelMismatch,
  NotASquare,
  NotComplete,
  NotNonSingular,
  UnknownLabel,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyFamily: return "EmptyFamily";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::TooFewRays: return "TooFewRays";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::NotUnimodular: return "NotUnimodular";
    case ErrorKind::DuplicateRay: return "DuplicateRay";
    case ErrorKind::BadWinding: return "BadWinding";
    case ErrorKind::NotBlowDownable: return "NotBlowDownable";
    case ErrorKind::NoOppositeRay: return "NoOppositeRay";
    case ErrorKind::InvalidPuzzle: return "InvalidPuzzle";
    case ErrorKind::NotWedged: return "NotWedged";
    case ErrorKind::LabelMismatch: return "LabelMismatch";
    case ErrorKind::NotASquare: return "NotASquare";
    case ErrorKind::NotComplete: return "NotComplete";
    case ErrorKind::NotNonSingular: return "NotNonSingular";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/**
 * Single exception type for the library. `kind` identifies the failed
 * contract; `index` carries the offending 1-based position when one exists
 * (0 otherwise) and `value` an auxiliary integer such as a determinant.
 */
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, long index = 0, long value = 0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind), index_(index), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  long index() const noexcept { return index_; }
  long value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  long index_;
  long value_;
};

}  // namespace toricwedge
