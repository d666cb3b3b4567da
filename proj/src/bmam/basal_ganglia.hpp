#pragma once

// Procedural layer: habit patterns keyed by domain.attribute, reinforced by
// repetition across sessions and weakened by contradiction. A pattern
// becomes a fixed point once two or more distinct sessions agree and no
// contradiction stands.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adapters.hpp"
#include "substrate.hpp"

namespace bmam {
namespace basal_ganglia {

// Folds one preference statement into the pattern table. Same value ->
// support counts distinct sessions; different value for the same key ->
// contradictions += 1 and the fixed point clears (the original value is
// kept until reinforcement says otherwise). Returns the touched pattern.
ProceduralPattern observe_statement(MemoryStore& store, const PreferenceStatement& pref,
                                    const std::string& session_id);

// Fixed-point patterns ordered by support descending, then key ascending.
std::vector<ProceduralPattern> fixed_point_patterns(const MemoryStore& store);

// Statements of fixed-point patterns whose domain is in task_tags, ordered
// by support descending then key ascending.
std::vector<std::string> apply_patterns(const MemoryStore& store,
                                        const std::set<std::string>& task_tags);

}  // namespace basal_ganglia
}  // namespace bmam
