#include "prefrontal.hpp"

#include "errors.hpp"

#include <algorithm>
#include <unordered_set>

#include "text.hpp"

namespace bmam {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Residents at or above the protected band resist eviction by weak arrivals.
constexpr double kWmProtectBand = 0.8;
constexpr double kWmWeakBand = 0.1;

}  // namespace

QueryProfile classify_query(const Classifier& classifier, const std::string& query) {
  if (tokenize(query).empty()) fail(ErrorCode::EmptyQuery, "query has no usable tokens");
  QueryProfile p = classifier.classify(query);
  p.temporal = clamp01(p.temporal);
  p.identity = clamp01(p.identity);
  p.preference = clamp01(p.preference);
  p.factual = clamp01(p.factual);
  return p;
}

RetrievalPlan route(const QueryProfile& profile, const EngineConfig& cfg) {
  RetrievalPlan plan;
  plan.weights[Source::Lexical] = 1.0 + profile.factual;
  plan.weights[Source::Dense] = 1.0 + profile.factual;
  plan.weights[Source::Graph] = 1.0 + profile.identity + profile.preference;
  plan.weights[Source::Temporal] = 1.0 + profile.temporal;
  for (auto it = plan.weights.begin(); it != plan.weights.end();) {
    if (it->second < cfg.route_drop_threshold)
      it = plan.weights.erase(it);
    else
      ++it;
  }
  double top = std::max(std::max(profile.temporal, profile.identity),
                        std::max(profile.preference, profile.factual));
  plan.max_rounds = top < 0.5 ? cfg.max_rounds : 1;
  return plan;
}

bool wm_push(MemoryStore& store, const WmItem& item) {
  auto wm = store.working_memory();
  size_t cap = static_cast<size_t>(store.config().cap_prefrontal_wm);
  if (wm.size() >= cap) {
    // Oldest-first scan for the first item the incoming one may displace.
    size_t evict = wm.size();
    for (size_t i = 0; i < wm.size(); ++i) {
      if (item.salience < kWmWeakBand && wm[i].salience >= kWmProtectBand) continue;
      evict = i;
      break;
    }
    if (evict == wm.size()) return false;  // nothing evictable: drop incoming
    wm.erase(wm.begin() + static_cast<long>(evict));
  }
  wm.push_back(item);
  store.replace_working_memory(wm);
  return true;
}

std::optional<WmItem> fast_path_check(const MemoryStore& store, const std::string& query,
                                      const QueryProfile& profile) {
  if (profile.temporal > 0.5) return std::nullopt;
  bool dominant = profile.factual > profile.temporal && profile.factual > profile.identity &&
                  profile.factual > profile.preference;
  if (!dominant) return std::nullopt;

  auto qtoks = tokenize(query);
  std::unordered_set<std::string> qset(qtoks.begin(), qtoks.end());

  const auto& wm = store.working_memory();
  std::optional<WmItem> best;
  size_t best_overlap = 0;
  for (const auto& item : wm) {  // oldest -> newest; >= keeps the newest tie
    auto toks = tokenize(item.summary);
    std::unordered_set<std::string> seen;
    size_t overlap = 0;
    for (const auto& t : toks)
      if (qset.count(t) && seen.insert(t).second) ++overlap;
    if (overlap >= 2 && overlap >= best_overlap) {
      best = item;
      best_overlap = overlap;
    }
  }
  return best;
}

}  // namespace bmam
