#pragma once

// Salience layer: novelty/conflict/feedback scoring, protection tagging for
// identity-critical traces, and the high-salience view used by consolidation.

#include <string>
#include <vector>

#include "adapters.hpp"
#include "substrate.hpp"

namespace bmam {
namespace amygdala {

// Novelty scoring compares against a bounded window of the most recent
// traces so ingest cost stays flat as the store grows.
constexpr size_t kNoveltySample = 100;

// 1 - max cosine similarity between the trace vector and the sample; 1.0
// when there is nothing to compare against.
double novelty_score(const std::vector<double>& trace_vec,
                     const std::vector<std::vector<double>>& sample);

// aggregate = 0.4*novelty + 0.4*conflict + 0.2*feedback (weights from cfg).
// The record is returned, not stored; conflict is binary.
SalienceRecord score_salience(const EngineConfig& cfg, MemoryId trace_ref, double novelty,
                              bool conflict, double feedback);

// Convenience form that embeds content directly (tests, small stores):
// sample = the most recent kNoveltySample traces other than the trace itself.
SalienceRecord score_salience(const MemoryStore& store, const Embedder& embedder,
                              const EpisodicTrace& trace, bool conflict, double feedback);

// Evicts lowest-aggregate unprotected records (protected ones only when
// nothing else remains) until the store respects the cap.
std::vector<MemoryId> enforce_salience_capacity(MemoryStore& store);

// Stores the record, then enforces the cap. Callers that still need to tag
// protection should put/tag/enforce separately so the fresh record cannot be
// the eviction victim before its tag lands.
MemoryId put_salience(MemoryStore& store, SalienceRecord rec);

enum class ProtectReason { Identity, HighSalience };

// Marks the trace's salience record protected; identity tagging also raises
// the aggregate to at least cfg.protection_threshold. Idempotent. The trace
// must already have a salience record (UnknownRef otherwise).
SalienceRecord tag_protection(MemoryStore& store, MemoryId trace_ref, ProtectReason reason);

// Top-n by aggregate descending; newer records first on ties.
std::vector<SalienceRecord> top_salient(const MemoryStore& store, size_t n);

}  // namespace amygdala
}  // namespace bmam
