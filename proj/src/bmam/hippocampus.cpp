#include "hippocampus.hpp"

#include "errors.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "prefrontal.hpp"
#include "text.hpp"

namespace bmam {

namespace {

std::string trimmed(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

constexpr size_t kSummaryChars = 160;

}  // namespace

ConversationTurn turn_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::ParseError, "turn must be an object");
  auto str = [&](const char* key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string())
      fail(ErrorCode::ParseError, std::string("turn missing string field '") + key + "'");
    return it->get<std::string>();
  };
  ConversationTurn t;
  t.session_id = str("session_id");
  t.speaker = str("speaker");
  t.text = str("text");
  t.timestamp = str("timestamp");
  if (auto it = j.find("turn"); it != j.end()) {
    if (!it->is_number_integer()) fail(ErrorCode::ParseError, "turn.turn must be an integer");
    t.turn = it->get<int>();
  }
  if (auto it = j.find("feedback"); it != j.end()) {
    if (!it->is_number()) fail(ErrorCode::ParseError, "turn.feedback must be a number");
    t.feedback = it->get<double>();
    if (t.feedback < 0.0 || t.feedback > 1.0)
      fail(ErrorCode::ParseError, "turn.feedback outside [0,1]");
  }
  return t;
}

json to_json(const ConversationTurn& t) {
  json j = json::object();
  j["session_id"] = t.session_id;
  j["turn"] = t.turn;
  j["speaker"] = t.speaker;
  j["text"] = t.text;
  j["timestamp"] = t.timestamp;
  j["feedback"] = t.feedback;
  return j;
}

MemoryId encode_episode(MemoryStore& store, const ConversationTurn& turn,
                        const ExtractionResult& analysis, bool push_wm) {
  if (trimmed(turn.text).empty()) fail(ErrorCode::EmptyContent, "turn text is blank");
  auto ingest = Timestamp::parse(turn.timestamp);
  if (!ingest) fail(ErrorCode::ParseError, "unparseable turn timestamp: " + turn.timestamp);

  EpisodicTrace t;
  t.session_id = turn.session_id;
  t.speaker = turn.speaker;
  t.content = turn.text;
  t.ingest_time = *ingest;
  t.event_time = *ingest;
  for (const auto& te : analysis.temporal_expressions) {
    if (te.at.is_known()) {
      t.event_time = te.at;
      break;
    }
  }
  t.entities = analysis.entities;
  t.salience = 0.0;
  t.stability = 0.5;
  t.access_count = 0;
  t.consolidated = false;
  MemoryId id = store.put(t);

  if (push_wm) {
    WmItem item;
    item.source_trace = id;
    item.summary = turn.text.size() > kSummaryChars ? turn.text.substr(0, kSummaryChars)
                                                    : turn.text;
    item.salience = 0.0;
    item.inserted_at = *ingest;
    wm_push(store, item);
  }
  return id;
}

std::vector<EpisodicTrace> address(const MemoryStore& store, const AddressKeys& keys) {
  if (keys.empty()) fail(ErrorCode::NoKeys, "address requires at least one key");

  std::vector<std::string> want_terms;
  for (const auto& term : keys.text_terms)
    for (const auto& tok : tokenize(term)) want_terms.push_back(tok);

  std::vector<EpisodicTrace> out;
  for (const auto& t : store.episodic()) {
    bool keep = true;
    for (const auto& e : keys.entities) {
      std::string norm = to_lower(e);
      if (std::find(t.entities.begin(), t.entities.end(), norm) == t.entities.end()) keep = false;
    }
    if (keys.session_id && t.session_id != *keys.session_id) keep = false;
    if (keep && (keys.from || keys.to)) {
      if (!t.event_time.is_known())
        keep = false;
      else if (keys.from && compare(t.event_time, *keys.from) == TemporalRelation::Before)
        keep = false;
      else if (keys.to && compare(t.event_time, *keys.to) == TemporalRelation::After)
        keep = false;
    }
    if (keep && !want_terms.empty()) {
      auto toks = tokenize(t.content);
      std::unordered_set<std::string> have(toks.begin(), toks.end());
      for (const auto& w : want_terms)
        if (!have.count(w)) keep = false;
    }
    if (keep) out.push_back(t);
  }

  std::stable_sort(out.begin(), out.end(), [](const EpisodicTrace& a, const EpisodicTrace& b) {
    bool ka = a.event_time.is_known(), kb = b.event_time.is_known();
    if (ka != kb) return ka;  // known event times before unknown
    if (ka) {
      auto sa = a.event_time.sort_key(), sb = b.event_time.sort_key();
      if (sa != sb) return sa > sb;  // newest first
    }
    return a.id < b.id;
  });
  return out;
}

EpisodicTrace record_access(MemoryStore& store, MemoryId id) {
  EpisodicTrace out;
  store.mutate_episodic(id, [&](EpisodicTrace& t) {
    t.access_count += 1;
    t.stability = std::min(1.0, t.stability + 0.1);
    out = t;
  });
  return out;
}

double retention_score(const EpisodicTrace& t, double recency_norm, const EngineConfig& cfg) {
  return cfg.retention_w_salience * t.salience + cfg.retention_w_stability * t.stability +
         cfg.retention_w_recency * recency_norm;
}

void prune_trace(MemoryStore& store, MemoryId id) {
  store.rewrite_timeline([&](std::vector<TimelineEvent>& events) {
    events.erase(std::remove_if(events.begin(), events.end(),
                                [&](const TimelineEvent& e) { return e.trace_ref == id; }),
                 events.end());
  });

  std::vector<MemoryId> stale_salience;
  for (const auto& r : store.salience())
    if (r.trace_ref == id) stale_salience.push_back(r.id);
  for (MemoryId sid : stale_salience) store.erase_salience(sid);

  auto wm = store.working_memory();
  auto kept = wm;
  kept.erase(std::remove_if(kept.begin(), kept.end(),
                            [&](const WmItem& w) { return w.source_trace == id; }),
             kept.end());
  if (kept.size() != wm.size()) store.replace_working_memory(kept);

  store.erase_episodic(id);
}

std::vector<MemoryId> enforce_capacity(MemoryStore& store,
                                       const std::set<uint64_t>& protected_traces,
                                       std::vector<std::string>* warnings) {
  std::vector<MemoryId> pruned;
  size_t cap = static_cast<size_t>(store.config().cap_hippocampus);
  while (store.episodic().size() > cap) {
    // Recency ranks shift as traces leave, so recompute per round.
    std::vector<EpisodicTrace> all = store.episodic();
    std::sort(all.begin(), all.end(),
              [](const EpisodicTrace& a, const EpisodicTrace& b) { return a.id < b.id; });

    size_t n = all.size();
    const EpisodicTrace* victim = nullptr;
    double victim_score = 0.0;
    bool victim_protected = false;
    for (int pass = 0; pass < 2 && !victim; ++pass) {
      bool want_protected = pass == 1;
      for (size_t i = 0; i < n; ++i) {
        bool is_protected = protected_traces.count(all[i].id.seq) > 0;
        if (is_protected != want_protected) continue;
        double rec = n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        double score = retention_score(all[i], rec, store.config());
        if (!victim || score < victim_score ||
            (score == victim_score && all[i].id < victim->id)) {
          victim = &all[i];
          victim_score = score;
          victim_protected = is_protected;
        }
      }
      if (victim) break;
    }
    if (!victim) break;  // store empty; cannot happen while over cap
    if (victim_protected && warnings)
      warnings->push_back("capacity pressure pruned protected trace " + victim->id.to_string());
    MemoryId id = victim->id;
    prune_trace(store, id);
    pruned.push_back(id);
  }
  return pruned;
}

}  // namespace bmam
