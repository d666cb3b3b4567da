#include "basal_ganglia.hpp"

#include "errors.hpp"

#include <algorithm>

namespace bmam {
namespace basal_ganglia {

namespace {

void enforce_cap(MemoryStore& store) {
  size_t cap = static_cast<size_t>(store.config().cap_basal_ganglia);
  while (store.procedural().size() > cap) {
    std::optional<ProceduralPattern> victim;
    for (int pass = 0; pass < 2 && !victim; ++pass) {
      bool want_fixed = pass == 1;  // fixed points are evicted last
      for (const auto& p : store.procedural()) {
        if (p.fixed_point != want_fixed) continue;
        if (victim && (p.support > victim->support ||
                       (p.support == victim->support && victim->id < p.id)))
          continue;
        victim = p;
      }
    }
    if (!victim) break;
    store.erase_pattern(victim->id);
  }
}

}  // namespace

ProceduralPattern observe_statement(MemoryStore& store, const PreferenceStatement& pref,
                                    const std::string& session_id) {
  std::string key = pref.domain + "." + pref.attribute;
  std::optional<MemoryId> existing;
  for (const auto& p : store.procedural())
    if (!existing && p.key == key) existing = p.id;

  ProceduralPattern out;
  if (existing) {
    store.mutate_pattern(*existing, [&](ProceduralPattern& p) {
      if (p.value == pref.value) {
        if (std::find(p.sessions.begin(), p.sessions.end(), session_id) == p.sessions.end()) {
          p.sessions.push_back(session_id);
          std::sort(p.sessions.begin(), p.sessions.end());
          p.support = static_cast<int>(p.sessions.size());
          p.statement = pref.statement;  // freshest phrasing wins
        }
      } else {
        p.contradictions += 1;
      }
      p.fixed_point = p.support >= 2 && p.contradictions == 0;
      out = p;
    });
  } else {
    ProceduralPattern p;
    p.key = key;
    p.value = pref.value;
    p.statement = pref.statement;
    p.sessions = {session_id};
    p.support = 1;
    p.contradictions = 0;
    p.fixed_point = false;
    p.id = store.put(p);
    out = p;
    enforce_cap(store);
  }
  return out;
}

std::vector<ProceduralPattern> fixed_point_patterns(const MemoryStore& store) {
  std::vector<ProceduralPattern> out;
  for (const auto& p : store.procedural())
    if (p.fixed_point) out.push_back(p);
  std::stable_sort(out.begin(), out.end(),
                   [](const ProceduralPattern& a, const ProceduralPattern& b) {
                     if (a.support != b.support) return a.support > b.support;
                     return a.key < b.key;
                   });
  return out;
}

std::vector<std::string> apply_patterns(const MemoryStore& store,
                                        const std::set<std::string>& task_tags) {
  std::vector<std::string> out;
  for (const auto& p : fixed_point_patterns(store)) {
    auto dot = p.key.find('.');
    std::string domain = dot == std::string::npos ? p.key : p.key.substr(0, dot);
    if (task_tags.count(domain)) out.push_back(p.statement);
  }
  return out;
}

}  // namespace basal_ganglia
}  // namespace bmam
