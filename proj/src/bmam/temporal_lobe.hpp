#pragma once

// Semantic layer: subject-predicate-object facts with exponentially averaged
// confidence, conflict detection, and supersession chains that preserve
// history instead of deleting it.

#include <optional>
#include <string>
#include <vector>

#include "adapters.hpp"
#include "substrate.hpp"

namespace bmam {
namespace temporal_lobe {

struct UpsertResult {
  SemanticFact fact;
  bool created = false;  // false: an existing live fact absorbed the evidence
};

// New evidence for (s,p,o) with confidence p. If a live fact with the same
// triple exists its confidence moves by EMA (c' = (1-l)c + l*p, l =
// cfg.ema_lambda), provenance is appended, and updated_at refreshes to the
// evidence trace's ingest time. Otherwise a new fact is created with
// confidence p. The provenance trace must exist.
UpsertResult upsert_fact(MemoryStore& store, const Triple& triple, MemoryId provenance);

// Live facts by default; optional subject/predicate filters are conjunctive
// and match exactly. Ordered confidence desc, then updated_at desc, then id.
std::vector<SemanticFact> query_facts(const MemoryStore& store,
                                      const std::optional<std::string>& subject,
                                      const std::optional<std::string>& predicate,
                                      bool include_superseded = false);

// Live facts asserting a different object for the same (subject, predicate).
std::vector<SemanticFact> detect_conflicts(const MemoryStore& store, const std::string& subject,
                                           const std::string& predicate,
                                           const std::string& object);

// Points old_fact.superseded_by at new_fact. Both must exist and share
// (subject, predicate); the replacement must itself be live, which keeps
// chains acyclic. Re-superseding the same old fact overwrites the pointer.
void supersede(MemoryStore& store, MemoryId old_fact, MemoryId new_fact);

// 1 - conflicted/(s,p) pairs over live facts; 1.0 when the store is empty.
double semantic_consistency(const MemoryStore& store);

// Evicts down to cap: superseded facts first (lowest confidence, oldest id),
// then live ones the same way.
std::vector<MemoryId> enforce_semantic_capacity(MemoryStore& store);

}  // namespace temporal_lobe
}  // namespace bmam
