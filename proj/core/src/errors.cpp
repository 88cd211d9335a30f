#include "safecomp/errors.hpp"

namespace safecomp {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::UnencodableValue: return "UnencodableValue";
    case Errc::EmptyChain: return "EmptyChain";
    case Errc::LengthMismatchBeyondDivergence: return "LengthMismatchBeyondDivergence";
    case Errc::UndefinedId: return "UndefinedId";
    case Errc::StateTooLarge: return "StateTooLarge";
    case Errc::StepBudgetExhausted: return "StepBudgetExhausted";
    case Errc::ParseError: return "ParseError";
    case Errc::HeaderMismatch: return "HeaderMismatch";
    case Errc::TooManyVariables: return "TooManyVariables";
    case Errc::MalformedTape: return "MalformedTape";
    case Errc::MalformedChain: return "MalformedChain";
    case Errc::MalformedProjection: return "MalformedProjection";
    case Errc::Unavailable: return "Unavailable";
    case Errc::UnknownTask: return "UnknownTask";
    case Errc::UnknownRequest: return "UnknownRequest";
    case Errc::WrongStatus: return "WrongStatus";
    case Errc::PayloadTooLarge: return "PayloadTooLarge";
    case Errc::BlobUnavailable: return "BlobUnavailable";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DuplicateProof: return "DuplicateProof";
    case Errc::TooEarly: return "TooEarly";
    case Errc::NotSolver: return "NotSolver";
    case Errc::InsufficientFunds: return "InsufficientFunds";
    case Errc::ScenarioError: return "ScenarioError";
    case Errc::BadArgument: return "BadArgument";
  }
  return "UnknownError";
}

}  // namespace safecomp
