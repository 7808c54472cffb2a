#pragma once

#include <stdexcept>
#include <string>

namespace holispoof {

enum class ErrorCode {
  // annotation
  NoJsonFound,
  MissingAuthenticityKey,
  MalformedInterval,
  InconsistentRecord,
  InvariantViolation,
  // metrics
  LengthMismatch,
  EmptyInput,
  NonFiniteLogit,
  SingleClassInput,
  NoEligibleSamples,
  WrongArity,
  ScoreOutOfRange,
  // manifests / mixing
  ManifestNotFound,
  DuplicateSampleId,
  ZeroCap,
  // gateway
  Timeout,
  AuthFailure,
  RateLimited,
  MalformedResponse,
  StructuredOutputFailure,
  ServiceUnavailable,
  // curation
  IndexOutOfRange,
  SpanNotFound,
  ScoreParseFailure,
  InvalidExampleRecord,
  // audio
  UnsupportedFormat,
  TruncatedFile,
  BadMagic,
  SynthesisFailure,
  RateMismatch,
  // adapter math
  ZeroColumnNorm,
  DimensionMismatch,
  // cli / config
  ConfigError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace holispoof
