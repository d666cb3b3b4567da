#include "temporal_lobe.hpp"

#include "errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bmam {
namespace temporal_lobe {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

UpsertResult upsert_fact(MemoryStore& store, const Triple& triple, MemoryId provenance) {
  if (triple.confidence < 0.0 || triple.confidence > 1.0)
    fail(ErrorCode::BadConfidence, "evidence confidence outside [0,1]");
  auto trace = store.find_episodic(provenance);
  if (!trace) fail(ErrorCode::UnknownRef, "provenance trace not found: " + provenance.to_string());

  std::optional<MemoryId> target;
  for (const auto& f : store.semantic())
    if (!target && f.live() && f.subject == triple.subject && f.predicate == triple.predicate &&
        f.object == triple.object)
      target = f.id;

  UpsertResult out;
  if (target) {
    double lambda = store.config().ema_lambda;
    store.mutate_fact(*target, [&](SemanticFact& f) {
      f.confidence = clamp01((1.0 - lambda) * f.confidence + lambda * triple.confidence);
      f.provenance.push_back(provenance);
      f.updated_at = trace->ingest_time;
      out.fact = f;
    });
    out.created = false;
  } else {
    SemanticFact f;
    f.subject = triple.subject;
    f.predicate = triple.predicate;
    f.object = triple.object;
    f.confidence = triple.confidence;
    f.provenance = {provenance};
    f.created_at = trace->ingest_time;
    f.updated_at = trace->ingest_time;
    f.id = store.put(f);
    out.fact = f;
    out.created = true;
  }
  return out;
}

std::vector<SemanticFact> query_facts(const MemoryStore& store,
                                      const std::optional<std::string>& subject,
                                      const std::optional<std::string>& predicate,
                                      bool include_superseded) {
  std::vector<SemanticFact> out;
  for (const auto& f : store.semantic()) {
    if (!include_superseded && !f.live()) continue;
    if (subject && f.subject != *subject) continue;
    if (predicate && f.predicate != *predicate) continue;
    out.push_back(f);
  }
  std::stable_sort(out.begin(), out.end(), [](const SemanticFact& a, const SemanticFact& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    bool ka = a.updated_at.is_known(), kb = b.updated_at.is_known();
    if (ka != kb) return ka;
    if (ka) {
      auto sa = a.updated_at.sort_key(), sb = b.updated_at.sort_key();
      if (sa != sb) return sa > sb;
    }
    return a.id < b.id;
  });
  return out;
}

std::vector<SemanticFact> detect_conflicts(const MemoryStore& store, const std::string& subject,
                                           const std::string& predicate,
                                           const std::string& object) {
  std::vector<SemanticFact> out;
  for (const auto& f : store.semantic())
    if (f.live() && f.subject == subject && f.predicate == predicate && f.object != object)
      out.push_back(f);
  return out;
}

void supersede(MemoryStore& store, MemoryId old_fact, MemoryId new_fact) {
  auto oldf = store.find_fact(old_fact);
  if (!oldf) fail(ErrorCode::UnknownId, "unknown fact: " + old_fact.to_string());
  auto newf = store.find_fact(new_fact);
  if (!newf) fail(ErrorCode::UnknownId, "unknown fact: " + new_fact.to_string());
  if (old_fact == new_fact)
    fail(ErrorCode::InvariantViolation, "a fact cannot supersede itself");
  if (oldf->subject != newf->subject || oldf->predicate != newf->predicate)
    fail(ErrorCode::PredicateMismatch,
         "supersession requires matching subject and predicate: " + old_fact.to_string() +
             " vs " + new_fact.to_string());
  if (!newf->live())
    fail(ErrorCode::InvariantViolation,
         "replacement fact is itself superseded: " + new_fact.to_string());
  store.mutate_fact(old_fact, [&](SemanticFact& f) {
    f.superseded_by = new_fact;
    f.has_superseded_by = true;
  });
}

double semantic_consistency(const MemoryStore& store) {
  std::map<std::pair<std::string, std::string>, std::set<std::string>> objects;
  for (const auto& f : store.semantic())
    if (f.live()) objects[{f.subject, f.predicate}].insert(f.object);
  if (objects.empty()) return 1.0;
  size_t conflicted = 0;
  for (const auto& [key, objs] : objects)
    if (objs.size() > 1) ++conflicted;
  return 1.0 - static_cast<double>(conflicted) / static_cast<double>(objects.size());
}

std::vector<MemoryId> enforce_semantic_capacity(MemoryStore& store) {
  std::vector<MemoryId> evicted;
  size_t cap = static_cast<size_t>(store.config().cap_temporal_lobe);
  while (store.semantic().size() > cap) {
    std::optional<SemanticFact> victim;
    bool victim_superseded = false;
    for (const auto& f : store.semantic()) {
      bool superseded = !f.live();
      if (victim) {
        if (superseded != victim_superseded) {
          if (!superseded) continue;  // superseded facts go first
        } else if (f.confidence > victim->confidence ||
                   (f.confidence == victim->confidence && victim->id < f.id)) {
          continue;
        }
      }
      victim = f;
      victim_superseded = superseded;
    }
    if (!victim) break;
    store.erase_fact(victim->id);
    evicted.push_back(victim->id);
  }
  return evicted;
}

}  // namespace temporal_lobe
}  // namespace bmam
