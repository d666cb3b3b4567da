#pragma once

// Episodic-to-semantic consolidation cycles, reconsolidation on recall, and
// forgetting (staleness plus capacity pressure).

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adapters.hpp"
#include "substrate.hpp"

namespace bmam {
namespace consolidation {

struct Report {
  std::vector<MemoryId> selected;
  std::vector<MemoryId> facts_created;
  std::vector<MemoryId> facts_updated;  // EMA-refreshed or superseded
  std::vector<MemoryId> pruned;
  std::vector<std::string> warnings;
  double cycle_ms = 0.0;
};

// Unconsolidated traces with access_count >= cfg.consolidate_min_access or
// salience >= cfg.consolidate_min_salience; salience desc, then id asc.
std::vector<EpisodicTrace> select_candidates(const MemoryStore& store);

// Extracts triples from each selected trace, folds them into the semantic
// store, supersedes conflicting older facts when the new evidence is not
// earlier than them (timestamp Unknown keeps both live), and marks the trace
// consolidated whether or not it yielded triples. `semantic_enabled` false
// still marks traces but writes no facts.
void consolidate(MemoryStore& store, const Extractor& extractor,
                 const std::vector<EpisodicTrace>& traces, bool semantic_enabled, Report& report);

// Recall-driven update: bumps access/stability, optionally rewrites content.
EpisodicTrace reconsolidate(MemoryStore& store, MemoryId id,
                            const std::optional<std::string>& patch);

// Stale pass: unconsolidated, unprotected, not in working memory, salience
// below cfg.forget_stale_salience, and older than cfg.forget_horizon_days
// relative to the newest ingest time. Then capacity enforcement. Returns
// pruned trace ids.
std::vector<MemoryId> forget(MemoryStore& store, const std::set<uint64_t>& protected_traces,
                             std::vector<std::string>* warnings);

}  // namespace consolidation
}  // namespace bmam
