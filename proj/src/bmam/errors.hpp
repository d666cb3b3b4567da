#pragma once

// Error model: one exception type carrying a stable code. The extern-C layer
// maps codes to bmam_status; core code never throws anything else on purpose.

#include <stdexcept>
#include <string>

namespace bmam {

enum class ErrorCode {
  Ok = 0,
  FrozenState,
  InvariantViolation,
  UnknownId,
  UnknownRef,
  NoKeys,
  EmptyContent,
  EmptyText,
  EmptyQuery,
  EmptyProbeSet,
  BadConfidence,
  BadWeights,
  BadK,
  BadArgument,
  PredicateMismatch,
  ArchiveCorrupt,
  VersionMismatch,
  EmbedderUnavailable,
  ExtractorUnavailable,
  IoError,
  ParseError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Ok: return "ok";
    case ErrorCode::FrozenState: return "frozen_state";
    case ErrorCode::InvariantViolation: return "invariant_violation";
    case ErrorCode::UnknownId: return "unknown_id";
    case ErrorCode::UnknownRef: return "unknown_ref";
    case ErrorCode::NoKeys: return "no_keys";
    case ErrorCode::EmptyContent: return "empty_content";
    case ErrorCode::EmptyText: return "empty_text";
    case ErrorCode::EmptyQuery: return "empty_query";
    case ErrorCode::EmptyProbeSet: return "empty_probe_set";
    case ErrorCode::BadConfidence: return "bad_confidence";
    case ErrorCode::BadWeights: return "bad_weights";
    case ErrorCode::BadK: return "bad_k";
    case ErrorCode::BadArgument: return "bad_argument";
    case ErrorCode::PredicateMismatch: return "predicate_mismatch";
    case ErrorCode::ArchiveCorrupt: return "archive_corrupt";
    case ErrorCode::VersionMismatch: return "version_mismatch";
    case ErrorCode::EmbedderUnavailable: return "embedder_unavailable";
    case ErrorCode::ExtractorUnavailable: return "extractor_unavailable";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::ParseError: return "parse_error";
  }
  return "unknown";
}

class BmamError : public std::runtime_error {
 public:
  BmamError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw BmamError(code, what);
}

}  // namespace bmam
