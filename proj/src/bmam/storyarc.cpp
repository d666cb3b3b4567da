#include "storyarc.hpp"

#include "errors.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "text.hpp"

namespace bmam {
namespace storyarc {

namespace {

std::string norm_entity(const std::string& s) {
  auto toks = tokenize(s);
  std::string out;
  for (const auto& t : toks) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::unordered_set<std::string> token_set(const std::string& s) {
  auto toks = tokenize(s);
  return {toks.begin(), toks.end()};
}

size_t overlap_count(const std::unordered_set<std::string>& pattern,
                     const std::string& description) {
  size_t n = 0;
  std::unordered_set<std::string> seen;
  for (const auto& t : tokenize(description))
    if (pattern.count(t) && seen.insert(t).second) ++n;
  return n;
}

std::vector<TimelineEvent> timeline_of(const MemoryStore& store, const std::string& entity) {
  std::string want = norm_entity(entity);
  std::vector<TimelineEvent> out;
  for (const auto& e : store.timeline())
    if (e.entity == want) out.push_back(e);
  return out;
}

// Timestamp order first, seq as the decider; unknown timestamps sort last.
bool event_before(const TimelineEvent& a, const TimelineEvent& b) {
  bool ka = a.at.is_known(), kb = b.at.is_known();
  if (ka != kb) return ka;
  if (ka) {
    auto sa = a.at.sort_key(), sb = b.at.sort_key();
    if (sa != sb) return sa < sb;
  }
  return a.seq < b.seq;
}

const std::unordered_set<std::string>& departure_cues() {
  static const std::unordered_set<std::string> cues = {
      "leave", "leaving", "leaves", "left", "quit", "quitting", "depart", "departed", "departing"};
  return cues;
}

}  // namespace

std::vector<MemoryId> index_event(MemoryStore& store, const EpisodicTrace& trace) {
  std::vector<MemoryId> created;
  std::unordered_set<std::string> touched;
  for (const auto& entity : trace.entities) {
    std::string want = norm_entity(entity);
    if (want.empty() || touched.count(want)) continue;
    touched.insert(want);
    bool exists = false;
    for (const auto& e : store.timeline())
      if (e.trace_ref == trace.id && e.entity == want) exists = true;
    if (exists) continue;
    TimelineEvent e;
    e.entity = want;
    e.at = trace.event_time;
    e.seq = 1;  // renumbered below
    e.description = trace.content;
    e.trace_ref = trace.id;
    created.push_back(store.put(e));
  }
  if (!created.empty()) {
    store.rewrite_timeline([&](std::vector<TimelineEvent>& events) {
      std::map<std::string, std::vector<size_t>> by_entity;
      for (size_t i = 0; i < events.size(); ++i) by_entity[events[i].entity].push_back(i);
      for (auto& [entity, idx] : by_entity) {
        if (!touched.count(entity)) continue;
        std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
          bool ka = events[a].at.is_known(), kb = events[b].at.is_known();
          if (ka != kb) return ka;
          if (ka) {
            auto sa = events[a].at.sort_key(), sb = events[b].at.sort_key();
            if (sa != sb) return sa < sb;
          }
          return false;  // stable: ties keep arrival order
        });
        int seq = 1;
        for (size_t i : idx) events[i].seq = seq++;
      }
    });
  }
  return created;
}

std::optional<WhenResult> query_when(const MemoryStore& store, const std::string& entity,
                                     const std::string& pattern) {
  auto pat = token_set(pattern);
  if (pat.empty()) return std::nullopt;
  std::optional<TimelineEvent> best;
  size_t best_overlap = 0;
  for (const auto& e : timeline_of(store, entity)) {
    if (!e.at.is_known()) continue;
    size_t ov = overlap_count(pat, e.description);
    if (ov < 1) continue;
    if (!best || ov > best_overlap ||
        (ov == best_overlap && event_before(*best, e)))  // later event wins ties
    {
      best = e;
      best_overlap = ov;
    }
  }
  if (!best) return std::nullopt;
  return WhenResult{best->at, *best};
}

TemporalRelation query_order(const MemoryStore& store, const std::string& entity_a,
                             const std::string& pattern_a, const std::string& entity_b,
                             const std::string& pattern_b) {
  auto a = query_when(store, entity_a, pattern_a);
  auto b = query_when(store, entity_b, pattern_b);
  if (!a || !b) return TemporalRelation::Unknown;
  return compare(a->at, b->at);
}

std::optional<int64_t> query_duration(const MemoryStore& store, const std::string& entity_a,
                                      const std::string& pattern_a, const std::string& entity_b,
                                      const std::string& pattern_b) {
  auto a = query_when(store, entity_a, pattern_a);
  auto b = query_when(store, entity_b, pattern_b);
  if (!a || !b) return std::nullopt;
  int64_t d = b->at.midpoint_days() - a->at.midpoint_days();
  return d < 0 ? -d : d;
}

std::optional<TimelineEvent> query_extremum(const MemoryStore& store, const std::string& entity,
                                            Extremum which, const std::string& pattern) {
  auto pat = token_set(pattern);
  std::optional<TimelineEvent> best;
  for (const auto& e : timeline_of(store, entity)) {
    if (!e.at.is_known()) continue;
    if (!pat.empty() && overlap_count(pat, e.description) < 1) continue;
    if (!best) {
      best = e;
      continue;
    }
    bool replace = which == Extremum::First ? event_before(e, *best) : event_before(*best, e);
    if (replace) best = e;
  }
  return best;
}

std::vector<TemporalAnswer> match_events(const MemoryStore& store, const std::string& query,
                                         const std::vector<std::string>& query_entities) {
  auto qset = token_set(query);
  if (qset.empty()) return {};

  std::vector<std::string> entities;
  std::unordered_set<std::string> entity_set;
  for (const auto& e : query_entities) {
    std::string n = norm_entity(e);
    if (!n.empty() && entity_set.insert(n).second) entities.push_back(n);
  }

  std::vector<TemporalAnswer> raw;
  auto add = [&](const TimelineEvent& e, double score) {
    raw.push_back(TemporalAnswer{e.trace_ref, e.entity, e.at, e.description, score});
  };

  // Plain matches: known-time events on the queried timelines (all timelines
  // when the query names no entity) sharing tokens with the query.
  for (const auto& e : store.timeline()) {
    if (!e.at.is_known()) continue;
    if (!entities.empty() && !entity_set.count(e.entity)) continue;
    size_t ov = overlap_count(qset, e.description);
    if (ov >= 1) add(e, static_cast<double>(ov));
  }

  bool departure = false;
  for (const auto& t : qset)
    if (departure_cues().count(t)) departure = true;

  if (departure && !entities.empty()) {
    for (const auto& from : entities) {
      auto last = query_extremum(store, from, Extremum::Last);
      if (!last) continue;
      // Earliest event on any other timeline that does not precede the
      // departure point: the place the story moves to next.
      std::map<std::string, std::vector<TimelineEvent>> others;
      for (const auto& e : store.timeline())
        if (e.entity != from && e.at.is_known()) others[e.entity].push_back(e);
      for (auto& [entity, events] : others) {
        std::sort(events.begin(), events.end(), event_before);
        for (const auto& e : events) {
          if (compare(e.at, last->at) == TemporalRelation::Before) continue;
          add(e, 2.0 + static_cast<double>(overlap_count(qset, e.description)));
          break;
        }
      }
    }
  }

  // Best answer per trace.
  std::map<MemoryId, TemporalAnswer> best;
  for (const auto& a : raw) {
    auto it = best.find(a.trace_ref);
    if (it == best.end() || a.score > it->second.score)
      best[a.trace_ref] = a;
  }
  std::vector<TemporalAnswer> out;
  for (auto& [id, a] : best) out.push_back(a);
  std::sort(out.begin(), out.end(), [](const TemporalAnswer& a, const TemporalAnswer& b) {
    if (a.score != b.score) return a.score > b.score;
    auto sa = a.at.sort_key(), sb = b.at.sort_key();
    if (sa != sb) return sa > sb;  // later events first
    return a.trace_ref < b.trace_ref;
  });
  return out;
}

}  // namespace storyarc
}  // namespace bmam
