#include "retrieval.hpp"

#include "errors.hpp"

#include <algorithm>
#include <unordered_set>

#include "text.hpp"

namespace bmam {

RankedList rank_lexical(const Bm25Index& index, const std::string& query, size_t k_top) {
  RankedList out;
  out.source = Source::Lexical;
  out.entries = index.query(query, k_top);
  return out;
}

RankedList rank_dense(const std::vector<MemoryId>& doc_ids,
                      const std::vector<std::vector<double>>& doc_vecs,
                      const std::vector<double>& query_vec, size_t k_top) {
  RankedList out;
  out.source = Source::Dense;
  std::vector<std::pair<MemoryId, double>> scored;
  for (size_t i = 0; i < doc_ids.size(); ++i)
    scored.emplace_back(doc_ids[i], cosine(query_vec, doc_vecs[i]));
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > k_top) scored.resize(k_top);
  out.entries = std::move(scored);
  return out;
}

RankedList rank_graph(const MemoryStore& store, const std::vector<std::string>& entities,
                      size_t k_top) {
  RankedList out;
  out.source = Source::Graph;
  if (entities.empty()) return out;
  std::unordered_set<std::string> want(entities.begin(), entities.end());

  std::map<MemoryId, double> best;  // trace -> max supporting confidence
  for (const auto& f : store.semantic()) {
    if (!f.live()) continue;
    if (!want.count(f.subject) && !want.count(f.object)) continue;
    for (MemoryId prov : f.provenance) {
      if (!store.find_episodic(prov)) continue;  // evidence trace was pruned
      auto it = best.find(prov);
      if (it == best.end() || f.confidence > it->second) best[prov] = f.confidence;
    }
  }

  std::vector<std::pair<MemoryId, double>> scored(best.begin(), best.end());
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > k_top) scored.resize(k_top);
  out.entries = std::move(scored);
  return out;
}

RankedList rank_temporal(const MemoryStore& store, const std::string& query,
                         const std::vector<std::string>& entities, const QueryProfile& profile,
                         size_t k_top) {
  RankedList out;
  out.source = Source::Temporal;
  if (profile.temporal < 0.3) return out;
  for (const auto& a : storyarc::match_events(store, query, entities)) {
    out.entries.emplace_back(a.trace_ref, a.score);
    if (out.entries.size() >= k_top) break;
  }
  return out;
}

std::vector<FusedResult> fuse_rrf(const std::vector<RankedList>& lists,
                                  const std::map<Source, double>& weights, double k) {
  if (k <= 0.0) fail(ErrorCode::BadK, "rank fusion constant must be positive");
  for (const auto& [src, w] : weights)
    if (w < 0.0) fail(ErrorCode::BadWeights, "negative fusion weight");
  {
    std::unordered_set<int> seen;
    for (const auto& l : lists)
      if (!seen.insert(static_cast<int>(l.source)).second)
        fail(ErrorCode::BadArgument, "duplicate ranked list for one source");
  }

  // Accumulate in fixed source order so the floating-point sum per candidate
  // is reproducible no matter how the caller ordered the lists.
  std::map<MemoryId, FusedResult> acc;
  for (Source src : {Source::Lexical, Source::Dense, Source::Graph, Source::Temporal}) {
    auto wit = weights.find(src);
    if (wit == weights.end()) continue;
    for (const auto& list : lists) {
      if (list.source != src) continue;
      for (size_t i = 0; i < list.entries.size(); ++i) {
        int rank = static_cast<int>(i) + 1;
        auto& r = acc[list.entries[i].first];
        r.candidate = list.entries[i].first;
        r.fused_score += wit->second / (k + static_cast<double>(rank));
        r.ranks[src] = rank;
      }
    }
  }

  std::vector<FusedResult> out;
  for (auto& [id, r] : acc) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(), [](const FusedResult& a, const FusedResult& b) {
    if (a.fused_score != b.fused_score) return a.fused_score > b.fused_score;
    int ba = a.ranks.empty() ? 0 : a.ranks.begin()->second;
    int bb = b.ranks.empty() ? 0 : b.ranks.begin()->second;
    for (const auto& [src, rank] : a.ranks) ba = std::min(ba, rank);
    for (const auto& [src, rank] : b.ranks) bb = std::min(bb, rank);
    if (ba != bb) return ba < bb;
    return a.candidate < b.candidate;
  });
  return out;
}

}  // namespace bmam
