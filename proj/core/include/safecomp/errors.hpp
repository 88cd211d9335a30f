#pragma once

#include <stdexcept>
#include <string>

namespace safecomp {

enum class Errc {
  UnencodableValue,
  EmptyChain,
  LengthMismatchBeyondDivergence,
  UndefinedId,
  StateTooLarge,
  StepBudgetExhausted,
  ParseError,
  HeaderMismatch,
  TooManyVariables,
  MalformedTape,
  MalformedChain,
  MalformedProjection,
  Unavailable,
  UnknownTask,
  UnknownRequest,
  WrongStatus,
  PayloadTooLarge,
  BlobUnavailable,
  IndexOutOfRange,
  DuplicateProof,
  TooEarly,
  NotSolver,
  InsufficientFunds,
  ScenarioError,
  BadArgument,
};

const char* errc_name(Errc code);

/// Exception type carrying a protocol error code. The arbiter converts these
/// into rejected-transaction outcomes instead of letting them escape.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace safecomp
