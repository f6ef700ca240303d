#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridsearch {

enum class ErrorCode {
  NonUnitEdge,
  DanglingEdge,
  Disconnected,
  HomebaseMissing,
  DuplicateRecord,
  ParseError,
  IndexOutOfRange,
  IllegalMove,
  NoCleanPath,
  BudgetExceeded,
  EmptyCollection,
  AlgorithmStalled,
  OracleTimeout,
  StateSpaceExceeded,
  OriginOutside,
  NoLatticeNodeNearOrigin,
  InvalidPolygon,
  EmptyComponent,
  InvariantViolation,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying one of the toolkit's error codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gridsearch
