// extern-C boundary: opaque handle around bmam::Engine, exceptions mapped to
// status codes, heap strings for every structured result.

#include "bmam/bmam.h"

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <string>

#include "bmam/engine.hpp"
#include "bmam/errors.hpp"

struct bmam_engine {
  std::unique_ptr<bmam::Engine> impl;
  mutable std::mutex err_mu;
  std::string last_error;
};

namespace {

thread_local std::string g_thread_error;

void set_error(bmam_engine* e, const char* msg) {
  if (e) {
    std::lock_guard<std::mutex> lk(e->err_mu);
    e->last_error = msg ? msg : "";
  } else {
    g_thread_error = msg ? msg : "";
  }
}

bmam_status map_code(bmam::ErrorCode c) {
  using EC = bmam::ErrorCode;
  switch (c) {
    case EC::Ok: return BMAM_OK;
    case EC::FrozenState: return BMAM_ERR_FROZEN_STATE;
    case EC::InvariantViolation: return BMAM_ERR_INVARIANT_VIOLATION;
    case EC::UnknownId: return BMAM_ERR_UNKNOWN_ID;
    case EC::UnknownRef: return BMAM_ERR_UNKNOWN_REF;
    case EC::NoKeys: return BMAM_ERR_NO_KEYS;
    case EC::EmptyContent: return BMAM_ERR_EMPTY_CONTENT;
    case EC::EmptyText: return BMAM_ERR_EMPTY_TEXT;
    case EC::EmptyQuery: return BMAM_ERR_EMPTY_QUERY;
    case EC::EmptyProbeSet: return BMAM_ERR_EMPTY_PROBE_SET;
    case EC::BadConfidence: return BMAM_ERR_BAD_CONFIDENCE;
    case EC::BadWeights: return BMAM_ERR_BAD_WEIGHTS;
    case EC::BadK: return BMAM_ERR_BAD_K;
    case EC::BadArgument: return BMAM_ERR_BAD_ARGUMENT;
    case EC::PredicateMismatch: return BMAM_ERR_PREDICATE_MISMATCH;
    case EC::ArchiveCorrupt: return BMAM_ERR_ARCHIVE_CORRUPT;
    case EC::VersionMismatch: return BMAM_ERR_VERSION_MISMATCH;
    case EC::EmbedderUnavailable: return BMAM_ERR_EMBEDDER_UNAVAILABLE;
    case EC::ExtractorUnavailable: return BMAM_ERR_EXTRACTOR_UNAVAILABLE;
    case EC::IoError: return BMAM_ERR_IO;
    case EC::ParseError: return BMAM_ERR_PARSE;
  }
  return BMAM_ERR_UNKNOWN;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

// Writes only on success so a failing call never leaves a dangling *dst.
bmam_status emit(char** dst, const std::string& s) {
  if (!dst) return BMAM_OK;  // caller declined the payload
  char* copy = dup_string(s);
  if (!copy) return BMAM_ERR_UNKNOWN;
  *dst = copy;
  return BMAM_OK;
}

template <typename Fn>
bmam_status guarded(bmam_engine* e, Fn&& fn) {
  try {
    return fn();
  } catch (const bmam::BmamError& err) {
    set_error(e, err.what());
    return map_code(err.code());
  } catch (const bmam::json::exception& ex) {
    set_error(e, ex.what());
    return BMAM_ERR_PARSE;
  } catch (const std::exception& ex) {
    set_error(e, ex.what());
    return BMAM_ERR_UNKNOWN;
  } catch (...) {
    set_error(e, "unknown failure");
    return BMAM_ERR_UNKNOWN;
  }
}

bmam_status require(bool ok, bmam_engine* e, const char* what) {
  if (ok) return BMAM_OK;
  set_error(e, what);
  return BMAM_ERR_BAD_ARGUMENT;
}

}  // namespace

extern "C" {

const char* bmam_status_name(bmam_status s) {
  switch (s) {
    case BMAM_OK: return "ok";
    case BMAM_ERR_FROZEN_STATE: return "frozen_state";
    case BMAM_ERR_INVARIANT_VIOLATION: return "invariant_violation";
    case BMAM_ERR_UNKNOWN_ID: return "unknown_id";
    case BMAM_ERR_UNKNOWN_REF: return "unknown_ref";
    case BMAM_ERR_NO_KEYS: return "no_keys";
    case BMAM_ERR_EMPTY_CONTENT: return "empty_content";
    case BMAM_ERR_EMPTY_TEXT: return "empty_text";
    case BMAM_ERR_EMPTY_QUERY: return "empty_query";
    case BMAM_ERR_EMPTY_PROBE_SET: return "empty_probe_set";
    case BMAM_ERR_BAD_CONFIDENCE: return "bad_confidence";
    case BMAM_ERR_BAD_WEIGHTS: return "bad_weights";
    case BMAM_ERR_BAD_K: return "bad_k";
    case BMAM_ERR_BAD_ARGUMENT: return "bad_argument";
    case BMAM_ERR_PREDICATE_MISMATCH: return "predicate_mismatch";
    case BMAM_ERR_ARCHIVE_CORRUPT: return "archive_corrupt";
    case BMAM_ERR_VERSION_MISMATCH: return "version_mismatch";
    case BMAM_ERR_EMBEDDER_UNAVAILABLE: return "embedder_unavailable";
    case BMAM_ERR_EXTRACTOR_UNAVAILABLE: return "extractor_unavailable";
    case BMAM_ERR_IO: return "io_error";
    case BMAM_ERR_PARSE: return "parse_error";
    case BMAM_ERR_UNKNOWN: return "unknown";
  }
  return "unknown";
}

bmam_status bmam_engine_create(const char* config_text, bmam_engine** out) {
  if (auto rc = require(out != nullptr, nullptr, "null out handle")) return rc;
  return guarded(nullptr, [&]() -> bmam_status {
    bmam::EngineConfig cfg;
    if (config_text && *config_text) cfg = bmam::EngineConfig::parse_text(config_text);
    cfg.validate();
    *out = new bmam_engine{std::make_unique<bmam::Engine>(cfg), {}, {}};
    return BMAM_OK;
  });
}

bmam_status bmam_engine_open(const char* archive_path, bmam_engine** out) {
  if (auto rc = require(out && archive_path, nullptr, "null argument")) return rc;
  return guarded(nullptr, [&]() -> bmam_status {
    auto impl = bmam::Engine::load(archive_path);
    *out = new bmam_engine{std::move(impl), {}, {}};
    return BMAM_OK;
  });
}

void bmam_engine_destroy(bmam_engine* e) { delete e; }

bmam_status bmam_engine_save(bmam_engine* e, const char* archive_path,
                             char** summary_json) {
  if (auto rc = require(e && archive_path, e, "null argument")) return rc;
  return guarded(e, [&]() -> bmam_status {
    bmam::ArchiveSummary sum = e->impl->save(archive_path);
    bmam::json counts = bmam::json::object();
    for (const auto& [store, n] : sum.counts) counts[store] = n;
    bmam::json j{{"path", sum.path}, {"digest", sum.digest}, {"counts", counts}};
    return emit(summary_json, j.dump());
  });
}

const char* bmam_last_error(const bmam_engine* e) {
  if (!e) return g_thread_error.c_str();
  std::lock_guard<std::mutex> lk(e->err_mu);
  return e->last_error.c_str();
}

void bmam_string_free(char* s) { std::free(s); }

bmam_status bmam_ingest_turn(bmam_engine* e, const char* turn_json,
                             char** summary_json) {
  if (auto rc = require(e && turn_json, e, "null argument")) return rc;
  return guarded(e, [&]() -> bmam_status {
    bmam::json j = bmam::json::parse(turn_json);
    bmam::IngestSummary sum = e->impl->ingest_turn(bmam::turn_from_json(j));
    return emit(summary_json, bmam::to_json(sum).dump());
  });
}

bmam_status bmam_query(bmam_engine* e, const char* text, size_t top_k,
                       char** evidence_json) {
  if (auto rc = require(e && text && evidence_json, e, "null argument")) return rc;
  return guarded(e, [&]() -> bmam_status {
    bmam::EvidenceBundle b = e->impl->retrieve(text, top_k);
    return emit(evidence_json, bmam::to_json(b).dump());
  });
}

bmam_status bmam_run_cycle(bmam_engine* e, char** report_json) {
  if (auto rc = require(e != nullptr, e, "null engine")) return rc;
  return guarded(e, [&]() -> bmam_status {
    bmam::consolidation::Report r = e->impl->run_cycle();
    return emit(report_json, bmam::to_json(r).dump());
  });
}

bmam_status bmam_record_access(bmam_engine* e, const char* memory_id,
                               char** trace_json) {
  if (auto rc = require(e && memory_id, e, "null argument")) return rc;
  return guarded(e, [&]() -> bmam_status {
    auto id = bmam::MemoryId::parse(memory_id);
    if (!id) {
      set_error(e, "bad memory id");
      return BMAM_ERR_BAD_ARGUMENT;
    }
    bmam::EpisodicTrace t = e->impl->record_access(*id);
    return emit(trace_json, bmam::to_json(t).dump());
  });
}

bmam_status bmam_evaluate_probes(bmam_engine* e, const char* probes_jsonl,
                                 char** report_json) {
  if (auto rc = require(e && probes_jsonl && report_json, e, "null argument")) return rc;
  return guarded(e, [&]() -> bmam_status {
    auto probes = bmam::metrics::parse_probes(probes_jsonl);
    bmam::metrics::SoulReport r = e->impl->evaluate_probes(probes);
    return emit(report_json, bmam::to_json(r).dump());
  });
}

bmam_status bmam_state_digest(bmam_engine* e, char** digest_hex) {
  if (auto rc = require(e && digest_hex, e, "null argument")) return rc;
  return guarded(e, [&]() -> bmam_status { return emit(digest_hex, e->impl->state_digest()); });
}

bmam_status bmam_counts(bmam_engine* e, char** counts_json) {
  if (auto rc = require(e && counts_json, e, "null argument")) return rc;
  return guarded(e, [&]() -> bmam_status { return emit(counts_json, e->impl->counts().dump()); });
}

bmam_status bmam_config_get(bmam_engine* e, const char* key, char** value) {
  if (auto rc = require(e && key && value, e, "null argument")) return rc;
  return guarded(e, [&]() -> bmam_status { return emit(value, e->impl->config_get(key)); });
}

bmam_status bmam_config_set(bmam_engine* e, const char* key, const char* value) {
  if (auto rc = require(e && key && value, e, "null argument")) return rc;
  return guarded(e, [&]() -> bmam_status {
    e->impl->config_set(key, value);
    return BMAM_OK;
  });
}

bmam_status bmam_config_json(bmam_engine* e, char** config_json) {
  if (auto rc = require(e && config_json, e, "null argument")) return rc;
  return guarded(e, [&]() -> bmam_status { return emit(config_json, e->impl->config_json().dump()); });
}

bmam_status bmam_config_text(bmam_engine* e, char** config_text) {
  if (auto rc = require(e && config_text, e, "null argument")) return rc;
  return guarded(e, [&]() -> bmam_status {
    bmam::EngineConfig cfg = bmam::EngineConfig::from_json(e->impl->config_json());
    return emit(config_text, cfg.dump_text());
  });
}

bmam_status bmam_set_frozen(bmam_engine* e, int frozen) {
  if (auto rc = require(e != nullptr, e, "null engine")) return rc;
  return guarded(e, [&]() -> bmam_status {
    e->impl->set_frozen(frozen != 0);
    return BMAM_OK;
  });
}

bmam_status bmam_is_frozen(bmam_engine* e, int* out) {
  if (auto rc = require(e && out, e, "null argument")) return rc;
  *out = e->impl->frozen() ? 1 : 0;
  return BMAM_OK;
}

bmam_status bmam_set_region_enabled(bmam_engine* e, const char* region, int enabled) {
  if (auto rc = require(e && region, e, "null argument")) return rc;
  auto r = bmam::parse_region(region);
  if (!r) {
    set_error(e, "unknown region");
    return BMAM_ERR_BAD_ARGUMENT;
  }
  e->impl->set_region_enabled(*r, enabled != 0);
  return BMAM_OK;
}

bmam_status bmam_region_enabled(bmam_engine* e, const char* region, int* out) {
  if (auto rc = require(e && region && out, e, "null argument")) return rc;
  auto r = bmam::parse_region(region);
  if (!r) {
    set_error(e, "unknown region");
    return BMAM_ERR_BAD_ARGUMENT;
  }
  *out = e->impl->region_enabled(*r) ? 1 : 0;
  return BMAM_OK;
}

}  // extern "C"
