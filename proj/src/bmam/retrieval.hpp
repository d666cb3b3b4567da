#pragma once

// The four retrieval signals (lexical, dense, graph, temporal) and weighted
// reciprocal-rank fusion over their ranked lists.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bm25.hpp"
#include "prefrontal.hpp"
#include "storyarc.hpp"
#include "substrate.hpp"

namespace bmam {

struct RankedList {
  Source source = Source::Lexical;
  std::vector<std::pair<MemoryId, double>> entries;  // best first; ids unique
};

struct FusedResult {
  MemoryId candidate;
  double fused_score = 0.0;
  std::map<Source, int> ranks;  // 1-based rank per contributing source
};

// BM25 top-k over episodic content; score desc, id asc.
RankedList rank_lexical(const Bm25Index& index, const std::string& query, size_t k_top);

// Exact cosine top-k between the query vector and per-trace vectors.
RankedList rank_dense(const std::vector<MemoryId>& doc_ids,
                      const std::vector<std::vector<double>>& doc_vecs,
                      const std::vector<double>& query_vec, size_t k_top);

// Live facts touching any query entity as subject or object, mapped to the
// provenance traces that still exist; score = fact confidence (max per
// trace); score desc, id asc.
RankedList rank_graph(const MemoryStore& store, const std::vector<std::string>& entities,
                      size_t k_top);

// Timeline evidence via the story matcher; only engaged when the profile's
// temporal dimension is at least 0.3.
RankedList rank_temporal(const MemoryStore& store, const std::string& query,
                         const std::vector<std::string>& entities, const QueryProfile& profile,
                         size_t k_top);

// fused(d) = sum over sources s ranking d of w_s / (k + rank_s(d)).
// Requires k > 0 (BadK), non-negative weights (BadWeights), and at most one
// list per source (BadArgument). Lists for sources without a weight are
// ignored. Order: fused score desc, then best contributing rank asc, then id
// asc. As k grows the ordering tends to appearance count desc, then total
// rank asc.
std::vector<FusedResult> fuse_rrf(const std::vector<RankedList>& lists,
                                  const std::map<Source, double>& weights, double k);

}  // namespace bmam
