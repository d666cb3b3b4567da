#include "amygdala.hpp"

#include "errors.hpp"

#include <algorithm>

#include "text.hpp"

namespace bmam {
namespace amygdala {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

double novelty_score(const std::vector<double>& trace_vec,
                     const std::vector<std::vector<double>>& sample) {
  double max_sim = 0.0;
  for (const auto& v : sample) max_sim = std::max(max_sim, cosine(trace_vec, v));
  return clamp01(1.0 - max_sim);
}

SalienceRecord score_salience(const EngineConfig& cfg, MemoryId trace_ref, double novelty,
                              bool conflict, double feedback) {
  SalienceRecord r;
  r.trace_ref = trace_ref;
  r.novelty = clamp01(novelty);
  r.conflict = conflict ? 1.0 : 0.0;
  r.feedback = clamp01(feedback);
  r.aggregate = cfg.salience_w_novelty * r.novelty + cfg.salience_w_conflict * r.conflict +
                cfg.salience_w_feedback * r.feedback;
  r.aggregate = clamp01(r.aggregate);
  r.protected_flag = false;
  r.reason = "";
  return r;
}

SalienceRecord score_salience(const MemoryStore& store, const Embedder& embedder,
                              const EpisodicTrace& trace, bool conflict, double feedback) {
  double novelty = 1.0;
  if (!tokenize(trace.content).empty()) {
    auto vec = embedder.embed(trace.content);
    std::vector<EpisodicTrace> others;
    for (const auto& t : store.episodic())
      if (!(t.id == trace.id)) others.push_back(t);
    if (others.size() > kNoveltySample)
      others.erase(others.begin(), others.end() - static_cast<long>(kNoveltySample));
    std::vector<std::vector<double>> sample;
    for (const auto& t : others)
      if (!tokenize(t.content).empty()) sample.push_back(embedder.embed(t.content));
    novelty = novelty_score(vec, sample);
  }
  return score_salience(store.config(), trace.id, novelty, conflict, feedback);
}

std::vector<MemoryId> enforce_salience_capacity(MemoryStore& store) {
  std::vector<MemoryId> evicted;
  size_t cap = static_cast<size_t>(store.config().cap_amygdala);
  while (store.salience().size() > cap) {
    std::optional<SalienceRecord> victim;
    for (int pass = 0; pass < 2 && !victim; ++pass) {
      bool want_protected = pass == 1;
      for (const auto& r : store.salience()) {
        if (r.protected_flag != want_protected) continue;
        if (victim && (r.aggregate > victim->aggregate ||
                       (r.aggregate == victim->aggregate && victim->id < r.id)))
          continue;
        victim = r;
      }
    }
    if (!victim) break;
    store.erase_salience(victim->id);
    evicted.push_back(victim->id);
  }
  return evicted;
}

MemoryId put_salience(MemoryStore& store, SalienceRecord rec) {
  MemoryId id = store.put(rec);
  enforce_salience_capacity(store);
  return id;
}

SalienceRecord tag_protection(MemoryStore& store, MemoryId trace_ref, ProtectReason reason) {
  std::optional<MemoryId> rec_id;
  for (const auto& r : store.salience())
    if (!rec_id && r.trace_ref == trace_ref) rec_id = r.id;
  if (!rec_id)
    fail(ErrorCode::UnknownRef, "no salience record for trace " + trace_ref.to_string());
  SalienceRecord out;
  store.mutate_salience(*rec_id, [&](SalienceRecord& r) {
    r.protected_flag = true;
    r.reason = reason == ProtectReason::Identity ? "identity" : "high_salience";
    if (reason == ProtectReason::Identity)
      r.aggregate = std::max(r.aggregate, store.config().protection_threshold);
    out = r;
  });
  return out;
}

std::vector<SalienceRecord> top_salient(const MemoryStore& store, size_t n) {
  std::vector<SalienceRecord> all = store.salience();
  std::stable_sort(all.begin(), all.end(), [](const SalienceRecord& a, const SalienceRecord& b) {
    if (a.aggregate != b.aggregate) return a.aggregate > b.aggregate;
    return b.id < a.id;  // newer records first
  });
  if (all.size() > n) all.resize(n);
  return all;
}

}  // namespace amygdala
}  // namespace bmam
