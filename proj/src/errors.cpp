#include "holispoof/errors.hpp"

namespace holispoof {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoJsonFound: return "NoJsonFound";
    case ErrorCode::MissingAuthenticityKey: return "MissingAuthenticityKey";
    case ErrorCode::MalformedInterval: return "MalformedInterval";
    case ErrorCode::InconsistentRecord: return "InconsistentRecord";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteLogit: return "NonFiniteLogit";
    case ErrorCode::SingleClassInput: return "SingleClassInput";
    case ErrorCode::NoEligibleSamples: return "NoEligibleSamples";
    case ErrorCode::WrongArity: return "WrongArity";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::ManifestNotFound: return "ManifestNotFound";
    case ErrorCode::DuplicateSampleId: return "DuplicateSampleId";
    case ErrorCode::ZeroCap: return "ZeroCap";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::AuthFailure: return "AuthFailure";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::StructuredOutputFailure: return "StructuredOutputFailure";
    case ErrorCode::ServiceUnavailable: return "ServiceUnavailable";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SpanNotFound: return "SpanNotFound";
    case ErrorCode::ScoreParseFailure: return "ScoreParseFailure";
    case ErrorCode::InvalidExampleRecord: return "InvalidExampleRecord";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::SynthesisFailure: return "SynthesisFailure";
    case ErrorCode::RateMismatch: return "RateMismatch";
    case ErrorCode::ZeroColumnNorm: return "ZeroColumnNorm";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

}  // namespace holispoof
