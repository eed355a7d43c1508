#pragma once

#include <stdexcept>
#include <string>

namespace circuitkit {

enum class ErrorKind {
  ZeroVector,
  NotInKernel,
  DimensionMismatch,
  CapExceeded,
  EmptySet,
  InfeasiblePoint,
  InfeasibleDirection,
  BadParameter,
  BadInstance,
  NotIntegral,
  ImproperColoring,
  EqualColorings,
  BadColorSet,
  SwapInvalid,
  NotAForest,
  IsActuallyCircuit,
  Unreachable,
  ParseError,
  LoopEdge,
  DuplicateEdge,
  UnknownClaim,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NotInKernel: return "NotInKernel";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorKind::InfeasibleDirection: return "InfeasibleDirection";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::BadInstance: return "BadInstance";
    case ErrorKind::NotIntegral: return "NotIntegral";
    case ErrorKind::ImproperColoring: return "ImproperColoring";
    case ErrorKind::EqualColorings: return "EqualColorings";
    case ErrorKind::BadColorSet: return "BadColorSet";
    case ErrorKind::SwapInvalid: return "SwapInvalid";
    case ErrorKind::NotAForest: return "NotAForest";
    case ErrorKind::IsActuallyCircuit: return "IsActuallyCircuit";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::LoopEdge: return "LoopEdge";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::UnknownClaim: return "UnknownClaim";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry the 1-based input line (0 when not line oriented).
class ParseFailure : public Error {
 public:
  ParseFailure(ErrorKind kind, int line, const std::string& msg)
      : Error(kind, "line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace circuitkit
