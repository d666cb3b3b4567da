#pragma once

// Record shapes for every store plus their canonical JSON forms. Canonical
// means: compact dump, lexicographically sorted keys, one record per line.
// Serialization must round-trip exactly — digests and archives depend on it.

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "types.hpp"

namespace bmam {

using json = nlohmann::json;

struct TemporalExpression {
  std::string surface;  // text as written, e.g. "January 2023"
  Timestamp at;

  bool operator==(const TemporalExpression&) const = default;
};

struct EpisodicTrace {
  MemoryId id;
  std::string session_id;
  std::string speaker;
  std::string content;
  Timestamp ingest_time;          // turn timestamp, never wall clock
  Timestamp event_time;           // best-resolved event time (may be unknown)
  std::vector<std::string> entities;
  std::vector<TemporalExpression> temporal_expressions;
  double salience = 0.0;
  double stability = 0.5;
  int access_count = 0;
  bool consolidated = false;
};

struct SemanticFact {
  MemoryId id;
  std::string subject;
  std::string predicate;
  std::string object;
  double confidence = 0.0;
  std::vector<MemoryId> provenance;  // episodic traces the evidence came from
  MemoryId superseded_by;            // seq 0 = live
  bool has_superseded_by = false;
  Timestamp created_at;
  Timestamp updated_at;

  bool live() const { return !has_superseded_by; }
};

struct TimelineEvent {
  MemoryId id;
  std::string entity;
  Timestamp at;
  int seq = 0;  // 1-based position within its entity timeline
  std::string description;
  MemoryId trace_ref;
};

struct SalienceRecord {
  MemoryId id;
  MemoryId trace_ref;
  double novelty = 0.0;
  double conflict = 0.0;
  double feedback = 0.0;
  double aggregate = 0.0;
  bool protected_flag = false;
  std::string reason;  // empty unless protected
};

struct ProceduralPattern {
  MemoryId id;
  std::string key;    // e.g. "code.language"
  std::string value;  // canonical value, e.g. "typescript"
  std::string statement;
  std::vector<std::string> sessions;  // distinct supporting sessions, sorted
  int support = 0;
  int contradictions = 0;
  bool fixed_point = false;
};

// FIFO position is the item's index in the working-memory list; the list
// order is preserved verbatim through serialization.
struct WmItem {
  MemoryId source_trace;
  std::string summary;
  double salience = 0.0;
  Timestamp inserted_at;
};

json to_json(const EpisodicTrace& t);
json to_json(const SemanticFact& f);
json to_json(const TimelineEvent& e);
json to_json(const SalienceRecord& s);
json to_json(const ProceduralPattern& p);
json to_json(const WmItem& w);

// Parsers throw BmamError(ParseError) on malformed input.
EpisodicTrace episodic_from_json(const json& j);
SemanticFact fact_from_json(const json& j);
TimelineEvent timeline_event_from_json(const json& j);
SalienceRecord salience_from_json(const json& j);
ProceduralPattern pattern_from_json(const json& j);
WmItem wm_item_from_json(const json& j);

// Compact dump with sorted keys (nlohmann's std::map object order).
std::string canonical_line(const json& j);

}  // namespace bmam
