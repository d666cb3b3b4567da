#include "consolidation.hpp"

#include "errors.hpp"

#include <algorithm>
#include <unordered_set>

#include "hippocampus.hpp"
#include "temporal_lobe.hpp"

namespace bmam {
namespace consolidation {

std::vector<EpisodicTrace> select_candidates(const MemoryStore& store) {
  const auto& cfg = store.config();
  std::vector<EpisodicTrace> out;
  for (const auto& t : store.episodic()) {
    if (t.consolidated) continue;
    if (t.access_count >= cfg.consolidate_min_access || t.salience >= cfg.consolidate_min_salience)
      out.push_back(t);
  }
  std::stable_sort(out.begin(), out.end(), [](const EpisodicTrace& a, const EpisodicTrace& b) {
    if (a.salience != b.salience) return a.salience > b.salience;
    return a.id < b.id;
  });
  return out;
}

void consolidate(MemoryStore& store, const Extractor& extractor,
                 const std::vector<EpisodicTrace>& traces, bool semantic_enabled, Report& report) {
  for (const auto& trace : traces) {
    if (semantic_enabled) {
      auto analysis = extractor.extract(trace.content, trace.speaker, trace.ingest_time);
      for (const auto& triple : analysis.triples) {
        auto conflicts = temporal_lobe::detect_conflicts(store, triple.subject, triple.predicate,
                                                         triple.object);
        auto res = temporal_lobe::upsert_fact(store, triple, trace.id);
        (res.created ? report.facts_created : report.facts_updated).push_back(res.fact.id);
        for (const auto& old : conflicts) {
          // The newer statement wins only when we can place it at or after
          // the old fact's last update; an unknown ordering keeps both live.
          auto rel = compare(res.fact.updated_at, old.updated_at);
          if (rel == TemporalRelation::Before || rel == TemporalRelation::Unknown) continue;
          temporal_lobe::supersede(store, old.id, res.fact.id);
          report.facts_updated.push_back(old.id);
        }
      }
      for (MemoryId evicted : temporal_lobe::enforce_semantic_capacity(store)) {
        report.warnings.push_back("semantic capacity evicted fact " + evicted.to_string());
      }
    }
    store.mutate_episodic(trace.id, [](EpisodicTrace& t) { t.consolidated = true; });
  }
}

EpisodicTrace reconsolidate(MemoryStore& store, MemoryId id,
                            const std::optional<std::string>& patch) {
  if (patch) {
    bool blank = patch->find_first_not_of(" \t\r\n") == std::string::npos;
    if (blank) fail(ErrorCode::EmptyContent, "reconsolidation patch is blank");
  }
  EpisodicTrace out;
  store.mutate_episodic(id, [&](EpisodicTrace& t) {
    t.access_count += 1;
    t.stability = std::min(1.0, t.stability + 0.1);
    if (patch) t.content = *patch;
    out = t;
  });
  return out;
}

std::vector<MemoryId> forget(MemoryStore& store, const std::set<uint64_t>& protected_traces,
                             std::vector<std::string>* warnings) {
  const auto& cfg = store.config();

  std::optional<Timestamp> now;
  for (const auto& t : store.episodic()) {
    if (!t.ingest_time.is_known()) continue;
    if (!now || now->sort_key() < t.ingest_time.sort_key()) now = t.ingest_time;
  }

  std::unordered_set<uint64_t> wm_refs;
  for (const auto& item : store.working_memory()) wm_refs.insert(item.source_trace.seq);

  std::vector<MemoryId> stale;
  if (now) {
    int64_t now_mid = now->midpoint_days();
    for (const auto& t : store.episodic()) {
      if (t.consolidated) continue;
      if (protected_traces.count(t.id.seq)) continue;
      if (wm_refs.count(t.id.seq)) continue;
      if (t.salience >= cfg.forget_stale_salience) continue;
      if (!t.ingest_time.is_known()) continue;
      if (now_mid - t.ingest_time.midpoint_days() <= cfg.forget_horizon_days) continue;
      stale.push_back(t.id);
    }
  }
  for (MemoryId id : stale) prune_trace(store, id);

  auto capped = enforce_capacity(store, protected_traces, warnings);
  stale.insert(stale.end(), capped.begin(), capped.end());
  return stale;
}

}  // namespace consolidation
}  // namespace bmam
