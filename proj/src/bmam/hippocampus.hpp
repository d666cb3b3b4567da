#pragma once

// Episodic layer: turn encoding, conjunctive key-value addressing, access
// tracking for reconsolidation, and retention-ordered capacity pruning.

#include <optional>
#include <set>
#include <vector>

#include "adapters.hpp"
#include "substrate.hpp"

namespace bmam {

struct ConversationTurn {
  std::string session_id;
  int turn = 0;
  std::string speaker;
  std::string text;
  std::string timestamp;  // ISO-8601 or "unknown"
  double feedback = 0.0;  // optional salience cue; 0 when the wire omits it
};

// Throws ParseError with the offending field; `feedback` is optional.
ConversationTurn turn_from_json(const json& j);
json to_json(const ConversationTurn& t);

struct AddressKeys {
  std::vector<std::string> entities;     // conjunctive: all must be present
  std::optional<std::string> session_id;
  std::optional<Timestamp> from;         // event_time range, inclusive bounds
  std::optional<Timestamp> to;
  std::vector<std::string> text_terms;   // conjunctive over content tokens

  bool empty() const {
    return entities.empty() && !session_id && !from && !to && text_terms.empty();
  }
};

// Stores the trace (salience 0 until the amygdala scores it) and pushes a
// working-memory summary. event_time = first resolved temporal expression,
// else the turn timestamp. push_wm=false skips the buffer (executive layer
// ablated).
MemoryId encode_episode(MemoryStore& store, const ConversationTurn& turn,
                        const ExtractionResult& analysis, bool push_wm = true);

// Conjunctive match over all provided keys; event_time descending (unknown
// last), then id ascending. Read-only.
std::vector<EpisodicTrace> address(const MemoryStore& store, const AddressKeys& keys);

EpisodicTrace record_access(MemoryStore& store, MemoryId id);

// retention = w_sal*salience + w_stab*stability + w_rec*recency_norm, where
// recency_norm is the trace's rank by creation order scaled to [0,1]
// (single trace -> 1).
double retention_score(const EpisodicTrace& t, double recency_norm, const EngineConfig& cfg);

// Removes the trace plus every record that references it (timeline events,
// salience records, working-memory items). Semantic provenance ids are left
// as-is: the episodic store is the source of truth and facts outlive their
// evidence by design.
void prune_trace(MemoryStore& store, MemoryId id);

// Prunes ascending retention among unprotected traces until at or under cap;
// falls back to protected traces (with a warning) only when nothing
// unprotected remains.
std::vector<MemoryId> enforce_capacity(MemoryStore& store,
                                       const std::set<uint64_t>& protected_traces,
                                       std::vector<std::string>* warnings);

}  // namespace bmam
