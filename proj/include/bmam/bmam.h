#ifndef BMAM_H
#define BMAM_H

/* C interface to the bmam memory engine.
 *
 * All functions are thread-compatible: one engine may be shared across
 * threads (reads run concurrently, writes serialize internally), but the
 * per-engine error string is only meaningful on the thread that observed
 * the failure. Strings returned through `char**` out-params are heap
 * allocations owned by the caller; release them with bmam_string_free.
 * Strings returned as `const char*` are borrowed and valid until the next
 * call on the same engine (or, for bmam_status_name, forever).
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BMAM_API __declspec(dllexport)
#else
#define BMAM_API __attribute__((visibility("default")))
#endif

typedef struct bmam_engine bmam_engine;

typedef enum bmam_status {
  BMAM_OK = 0,
  BMAM_ERR_FROZEN_STATE = 1,
  BMAM_ERR_INVARIANT_VIOLATION = 2,
  BMAM_ERR_UNKNOWN_ID = 3,
  BMAM_ERR_UNKNOWN_REF = 4,
  BMAM_ERR_NO_KEYS = 5,
  BMAM_ERR_EMPTY_CONTENT = 6,
  BMAM_ERR_EMPTY_TEXT = 7,
  BMAM_ERR_EMPTY_QUERY = 8,
  BMAM_ERR_EMPTY_PROBE_SET = 9,
  BMAM_ERR_BAD_CONFIDENCE = 10,
  BMAM_ERR_BAD_WEIGHTS = 11,
  BMAM_ERR_BAD_K = 12,
  BMAM_ERR_BAD_ARGUMENT = 13,
  BMAM_ERR_PREDICATE_MISMATCH = 14,
  BMAM_ERR_ARCHIVE_CORRUPT = 15,
  BMAM_ERR_VERSION_MISMATCH = 16,
  BMAM_ERR_EMBEDDER_UNAVAILABLE = 17,
  BMAM_ERR_EXTRACTOR_UNAVAILABLE = 18,
  BMAM_ERR_IO = 19,
  BMAM_ERR_PARSE = 20,
  BMAM_ERR_UNKNOWN = 21
} bmam_status;

/* Stable lowercase name for a status code ("ok", "frozen_state", ...). */
BMAM_API const char* bmam_status_name(bmam_status s);

/* --- lifecycle ---------------------------------------------------------- */

/* Fresh engine. config_text is the key=value text format (NULL or ""
 * for defaults); invalid keys or values fail with BMAM_ERR_PARSE /
 * BMAM_ERR_BAD_ARGUMENT. */
BMAM_API bmam_status bmam_engine_create(const char* config_text, bmam_engine** out);

/* Engine restored from a .bma archive written by bmam_engine_save. */
BMAM_API bmam_status bmam_engine_open(const char* archive_path, bmam_engine** out);

BMAM_API void bmam_engine_destroy(bmam_engine* e);

/* Writes the full state as a .bma archive. summary_json (optional: pass
 * NULL to skip) receives {"path", "digest", "counts": {...}}. */
BMAM_API bmam_status bmam_engine_save(bmam_engine* e, const char* archive_path,
                                      char** summary_json);

/* Message for the most recent failing call on this engine. With a NULL
 * engine, the thread-local message from a failed create/open. */
BMAM_API const char* bmam_last_error(const bmam_engine* e);

BMAM_API void bmam_string_free(char* s);

/* --- memory operations -------------------------------------------------- */

/* One conversation turn as a JSON object: {"session_id", "turn", "speaker",
 * "text", "timestamp", "feedback"?}. summary_json (optional) receives the
 * ingest summary. */
BMAM_API bmam_status bmam_ingest_turn(bmam_engine* e, const char* turn_json,
                                      char** summary_json);

/* Read-only retrieval; evidence_json receives the evidence bundle:
 * profile, plan, fused top-k, temporal answers, fast-path evidence. */
BMAM_API bmam_status bmam_query(bmam_engine* e, const char* text, size_t top_k,
                                char** evidence_json);

/* One maintenance cycle (consolidate then forget). report_json (optional)
 * receives selected/facts_created/facts_updated/pruned/warnings/cycle_ms. */
BMAM_API bmam_status bmam_run_cycle(bmam_engine* e, char** report_json);

/* Marks a retrieval hit on an episodic trace ("epi:N"): bumps access count
 * and stability. trace_json (optional) receives the updated record. */
BMAM_API bmam_status bmam_record_access(bmam_engine* e, const char* memory_id,
                                        char** trace_json);

/* Scores a JSONL probe suite (one {"kind","query","expected"} per line;
 * kinds "temporal" and "identity", at least one of each). report_json
 * receives T, C, I, S and per-probe results. */
BMAM_API bmam_status bmam_evaluate_probes(bmam_engine* e, const char* probes_jsonl,
                                          char** report_json);

/* --- state and control -------------------------------------------------- */

/* Canonical SHA-256 over the full store, as a hex string. */
BMAM_API bmam_status bmam_state_digest(bmam_engine* e, char** digest_hex);

/* Per-store record counts as a JSON object. */
BMAM_API bmam_status bmam_counts(bmam_engine* e, char** counts_json);

BMAM_API bmam_status bmam_config_get(bmam_engine* e, const char* key, char** value);
BMAM_API bmam_status bmam_config_set(bmam_engine* e, const char* key, const char* value);

/* Full configuration: as JSON (bmam_config_json) or as the key=value text
 * format accepted by bmam_engine_create (bmam_config_text). */
BMAM_API bmam_status bmam_config_json(bmam_engine* e, char** config_json);
BMAM_API bmam_status bmam_config_text(bmam_engine* e, char** config_text);

/* Frozen engines reject every mutation with BMAM_ERR_FROZEN_STATE;
 * queries, probes, digests, and saves still work. */
BMAM_API bmam_status bmam_set_frozen(bmam_engine* e, int frozen);
BMAM_API bmam_status bmam_is_frozen(bmam_engine* e, int* out);

/* Region toggles by name: "hippocampus", "temporal_lobe", "amygdala",
 * "prefrontal", "basal_ganglia". Unknown names fail with
 * BMAM_ERR_BAD_ARGUMENT. */
BMAM_API bmam_status bmam_set_region_enabled(bmam_engine* e, const char* region,
                                             int enabled);
BMAM_API bmam_status bmam_region_enabled(bmam_engine* e, const char* region, int* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BMAM_H */
