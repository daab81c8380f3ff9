#include "parc/error.hpp"

namespace parc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidChain: return "InvalidChain";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::MissingStepEntry: return "MissingStepEntry";
    case ErrorCode::ChainMismatch: return "ChainMismatch";
    case ErrorCode::MissingContext: return "MissingContext";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::ScriptMiss: return "ScriptMiss";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::StepCountMismatch: return "StepCountMismatch";
    case ErrorCode::AlignmentError: return "AlignmentError";
    case ErrorCode::PerturbationRejected: return "PerturbationRejected";
    case ErrorCode::Unreadable: return "Unreadable";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

}  // namespace parc
