#pragma once

// Executive layer: query profiling, source routing, the working-memory
// buffer, and the fast answer path that serves from that buffer.

#include <map>
#include <optional>
#include <string>

#include "adapters.hpp"
#include "substrate.hpp"

namespace bmam {

enum class Source { Lexical, Dense, Graph, Temporal };

inline const char* source_name(Source s) {
  switch (s) {
    case Source::Lexical: return "lexical";
    case Source::Dense: return "dense";
    case Source::Graph: return "graph";
    case Source::Temporal: return "temporal";
  }
  return "?";
}

struct RetrievalPlan {
  std::map<Source, double> weights;
  int max_rounds = 1;
  bool fast_path = false;
};

// Rejects blank queries (EmptyQuery) and clamps every dimension to [0,1].
QueryProfile classify_query(const Classifier& classifier, const std::string& query);

// Base weight 1 per source; temporal += profile.temporal,
// graph += identity + preference, lexical and dense += factual. Sources
// below cfg.route_drop_threshold are dropped. max_rounds = cfg.max_rounds
// when every dimension is < 0.5, else 1.
RetrievalPlan route(const QueryProfile& profile, const EngineConfig& cfg);

// FIFO push with a salience override: when the buffer is full the oldest
// evictable item leaves; a resident with salience >= 0.8 cannot be evicted
// by an incoming item with salience < 0.1. If nothing is evictable the
// incoming item is dropped. Returns false when dropped.
bool wm_push(MemoryStore& store, const WmItem& item);

// Serves a working-memory summary without touching the index stores when the
// profile is dominantly factual (factual strictly above every other
// dimension), temporal <= 0.5, and a summary shares at least two normalized
// terms with the query. Picks the highest-overlap item, newest on ties.
std::optional<WmItem> fast_path_check(const MemoryStore& store, const std::string& query,
                                      const QueryProfile& profile);

}  // namespace bmam
