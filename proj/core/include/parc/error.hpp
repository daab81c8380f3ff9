#pragma once

#include <stdexcept>
#include <string>

namespace parc {

/// Failure categories surfaced by the library. Every throwing code path uses
/// Error with one of these codes; nothing throws raw std exceptions.
enum class ErrorCode {
  InvalidChain,
  IndexOutOfRange,
  MissingStepEntry,
  ChainMismatch,
  MissingContext,
  ParseFailure,
  TransportError,
  ScriptMiss,
  SchemaViolation,
  StepCountMismatch,
  AlignmentError,
  PerturbationRejected,
  Unreadable,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace parc
