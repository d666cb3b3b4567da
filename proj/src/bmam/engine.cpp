#include "engine.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_set>

#include "amygdala.hpp"
#include "basal_ganglia.hpp"
#include "errors.hpp"
#include "temporal_lobe.hpp"
#include "text.hpp"

namespace bmam {

namespace {

constexpr size_t kSignalDepth = 50;  // per-source candidates fed into fusion

std::string trimmed(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// answer confirms expected when it is at least as precise and agrees on
// every field down to the expected granularity.
bool matches_at_granularity(const Timestamp& answer, const Timestamp& expected) {
  if (!answer.is_known() || !expected.is_known()) return false;
  if (static_cast<int>(answer.granularity) < static_cast<int>(expected.granularity)) return false;
  if (answer.year != expected.year) return false;
  auto g = static_cast<int>(expected.granularity);
  if (g >= static_cast<int>(Granularity::Month) && answer.month != expected.month) return false;
  if (g >= static_cast<int>(Granularity::Day) && answer.day != expected.day) return false;
  if (g >= static_cast<int>(Granularity::Hour) && answer.hour != expected.hour) return false;
  if (g >= static_cast<int>(Granularity::Minute) && answer.minute != expected.minute) return false;
  return true;
}

// "entity : pattern ~ entity : pattern" — the relation-probe form.
struct OrderProbe {
  std::string entity_a, pattern_a, entity_b, pattern_b;
};

std::optional<OrderProbe> parse_order_probe(const std::string& query) {
  size_t tilde = query.find(" ~ ");
  if (tilde == std::string::npos) return std::nullopt;
  auto side = [](const std::string& s) -> std::optional<std::pair<std::string, std::string>> {
    size_t colon = s.find(" : ");
    if (colon == std::string::npos) return std::nullopt;
    std::string entity = trimmed(s.substr(0, colon));
    std::string pattern = trimmed(s.substr(colon + 3));
    if (entity.empty() || pattern.empty()) return std::nullopt;
    return std::make_pair(entity, pattern);
  };
  auto a = side(query.substr(0, tilde));
  auto b = side(query.substr(tilde + 3));
  if (!a || !b) return std::nullopt;
  return OrderProbe{a->first, a->second, b->first, b->second};
}

}  // namespace

const char* region_name(Region r) {
  switch (r) {
    case Region::Hippocampus: return "hippocampus";
    case Region::TemporalLobe: return "temporal_lobe";
    case Region::Amygdala: return "amygdala";
    case Region::Prefrontal: return "prefrontal";
    case Region::BasalGanglia: return "basal_ganglia";
  }
  return "?";
}

std::optional<Region> parse_region(const std::string& name) {
  for (Region r : {Region::Hippocampus, Region::TemporalLobe, Region::Amygdala,
                   Region::Prefrontal, Region::BasalGanglia})
    if (name == region_name(r)) return r;
  return std::nullopt;
}

Engine::Engine(EngineConfig cfg, AdapterSet adapters)
    : store_(std::move(cfg)), adapters_(std::move(adapters)) {
  if (!adapters_.embedder || !adapters_.extractor || !adapters_.classifier)
    adapters_ = AdapterSet::offline(store_.config().embed_dim);
}

std::vector<double> Engine::cached_embedding(const EpisodicTrace& t) const {
  std::lock_guard<std::mutex> lk(cache_mu_);
  uint64_t h = fnv1a64(t.content);
  auto it = embed_cache_.find(t.id.seq);
  if (it != embed_cache_.end() && it->second.first == h) return it->second.second;
  std::vector<double> vec;
  if (!tokenize(t.content).empty()) vec = adapters_.embedder->embed(t.content);
  embed_cache_[t.id.seq] = {h, vec};
  return vec;
}

void Engine::ensure_indexes() const {
  std::lock_guard<std::mutex> lk(cache_mu_);
  if (index_revision_ == store_.revision()) return;
  std::vector<Bm25Doc> docs;
  dense_ids_.clear();
  dense_vecs_.clear();
  for (const auto& t : store_.episodic()) {
    docs.push_back(Bm25Doc{t.id, tokenize(t.content)});
    uint64_t h = fnv1a64(t.content);
    auto it = embed_cache_.find(t.id.seq);
    std::vector<double> vec;
    if (it != embed_cache_.end() && it->second.first == h) {
      vec = it->second.second;
    } else {
      if (!docs.back().tokens.empty()) vec = adapters_.embedder->embed(t.content);
      embed_cache_[t.id.seq] = {h, vec};
    }
    if (vec.empty()) vec.assign(static_cast<size_t>(store_.config().embed_dim), 0.0);
    dense_ids_.push_back(t.id);
    dense_vecs_.push_back(std::move(vec));
  }
  bm25_ = std::make_unique<Bm25Index>(std::move(docs), store_.config().bm25_k1,
                                      store_.config().bm25_b);
  index_revision_ = store_.revision();
}

std::set<uint64_t> Engine::protected_trace_seqs() const {
  std::set<uint64_t> out;
  for (const auto& r : store_.salience())
    if (r.protected_flag) out.insert(r.trace_ref.seq);
  return out;
}

IngestSummary Engine::ingest_turn(const ConversationTurn& turn) {
  std::unique_lock<std::shared_mutex> lk(mu_);
  if (store_.frozen()) fail(ErrorCode::FrozenState, "store is frozen");
  if (trimmed(turn.text).empty()) fail(ErrorCode::EmptyContent, "turn text is blank");
  auto ts = Timestamp::parse(turn.timestamp);
  if (!ts) fail(ErrorCode::ParseError, "unparseable turn timestamp: " + turn.timestamp);

  bool hippo = region_enabled(Region::Hippocampus);
  bool semantic = region_enabled(Region::TemporalLobe);
  bool amyg = region_enabled(Region::Amygdala);
  bool exec = region_enabled(Region::Prefrontal);
  bool habits = region_enabled(Region::BasalGanglia);

  ExtractionResult analysis = adapters_.extractor->extract(turn.text, turn.speaker, *ts);

  MemoryId id;
  if (hippo) {
    id = encode_episode(store_, turn, analysis, /*push_wm=*/exec);
  } else {
    // Structuring ablated: the substrate keeps only the raw utterance.
    EpisodicTrace raw;
    raw.session_id = turn.session_id;
    raw.speaker = turn.speaker;
    raw.content = turn.text;
    raw.ingest_time = *ts;
    raw.event_time = *ts;
    id = store_.put(raw);
  }

  IngestSummary summary;
  summary.trace = id;
  summary.entities = hippo ? analysis.entities.size() : 0;
  summary.triples = analysis.triples.size();
  summary.preferences = analysis.preferences.size();

  bool conflict = false;
  if (semantic) {
    for (const auto& triple : analysis.triples) {
      if (!temporal_lobe::detect_conflicts(store_, triple.subject, triple.predicate, triple.object)
               .empty()) {
        conflict = true;
        break;
      }
    }
  }
  summary.conflict = conflict;

  if (amyg) {
    const EpisodicTrace* trace = store_.find_episodic(id);
    double novelty = 1.0;
    if (!tokenize(trace->content).empty()) {
      auto vec = cached_embedding(*trace);
      std::vector<const EpisodicTrace*> others;
      for (const auto& t : store_.episodic())
        if (!(t.id == id)) others.push_back(&t);
      if (others.size() > amygdala::kNoveltySample)
        others.erase(others.begin(),
                     others.end() - static_cast<long>(amygdala::kNoveltySample));
      double max_sim = 0.0;
      for (const auto* t : others) {
        auto other = cached_embedding(*t);
        if (!other.empty()) max_sim = std::max(max_sim, cosine(vec, other));
      }
      novelty = std::min(1.0, std::max(0.0, 1.0 - max_sim));
    }
    SalienceRecord rec = amygdala::score_salience(store_.config(), id, novelty, conflict,
                                                  turn.feedback);
    store_.put(rec);
    if (analysis.identity_flag)
      rec = amygdala::tag_protection(store_, id, amygdala::ProtectReason::Identity);
    else if (rec.aggregate >= store_.config().protection_threshold)
      rec = amygdala::tag_protection(store_, id, amygdala::ProtectReason::HighSalience);
    amygdala::enforce_salience_capacity(store_);
    store_.mutate_episodic(id, [&](EpisodicTrace& t) { t.salience = rec.aggregate; });
    if (hippo && exec) {
      auto wm = store_.working_memory();
      bool changed = false;
      for (auto& item : wm)
        if (item.source_trace == id && item.salience != rec.aggregate) {
          item.salience = rec.aggregate;
          changed = true;
        }
      if (changed) store_.replace_working_memory(wm);
    }
    summary.salience = rec.aggregate;
    summary.protected_flag = rec.protected_flag;
  }

  if (hippo) {
    const EpisodicTrace* trace = store_.find_episodic(id);
    summary.timeline_events = storyarc::index_event(store_, *trace).size();
  }

  if (habits) {
    for (const auto& pref : analysis.preferences)
      basal_ganglia::observe_statement(store_, pref, turn.session_id);
  }

  // The episodic cap is a standing invariant, not a cycle-time afterthought:
  // an insert that overflows the store evicts immediately.
  enforce_capacity(store_, protected_trace_seqs(), nullptr);
  return summary;
}

std::vector<std::string> Engine::query_entities(const std::string& query) const {
  auto analysis = adapters_.extractor->extract(query, "user", Timestamp::unknown());
  std::vector<std::string> out = analysis.entities;
  static const std::unordered_set<std::string> first_person = {"i", "my", "me", "mine", "im"};
  for (const auto& tok : tokenize(query)) {
    if (first_person.count(tok)) {
      if (std::find(out.begin(), out.end(), "user") == out.end()) out.push_back("user");
      break;
    }
  }
  return out;
}

EvidenceBundle Engine::retrieve(const std::string& query, size_t top_k) const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  return retrieve_impl(query, top_k);
}

EvidenceBundle Engine::retrieve_impl(const std::string& query, size_t top_k) const {
  if (tokenize(query).empty()) fail(ErrorCode::EmptyQuery, "query has no usable tokens");
  bool exec = region_enabled(Region::Prefrontal);

  EvidenceBundle bundle;
  if (exec) {
    bundle.profile = classify_query(*adapters_.classifier, query);
    bundle.plan = route(bundle.profile, store_.config());
  } else {
    bundle.profile = QueryProfile{0.5, 0.5, 0.5, 0.5};
    bundle.plan.weights = {{Source::Lexical, 1.0},
                           {Source::Dense, 1.0},
                           {Source::Graph, 1.0},
                           {Source::Temporal, 1.0}};
    bundle.plan.max_rounds = 1;
  }

  if (exec) {
    if (auto fast = fast_path_check(store_, query, bundle.profile)) {
      bundle.plan.fast_path = true;
      bundle.fast_path = true;
      bundle.fast_evidence = *fast;
      bundle.rounds_used = 0;
      bundle.uncertainty = 0.0;
      return bundle;
    }
  }

  ensure_indexes();

  // Disabled regions make their signal inert at query time too: no timeline
  // evidence without the episodic indexer, no graph walk without facts.
  bool hippo = region_enabled(Region::Hippocampus);
  bool semantic = region_enabled(Region::TemporalLobe);

  std::string working_query = query;
  std::vector<std::string> entities = query_entities(query);
  auto weights = bundle.plan.weights;

  std::vector<FusedResult> fused;
  for (int round = 1; round <= bundle.plan.max_rounds; ++round) {
    std::vector<RankedList> lists;
    if (weights.count(Source::Lexical))
      lists.push_back(rank_lexical(*bm25_, working_query, kSignalDepth));
    if (weights.count(Source::Dense))
      lists.push_back(rank_dense(dense_ids_, dense_vecs_,
                                 adapters_.embedder->embed(working_query), kSignalDepth));
    if (semantic && weights.count(Source::Graph))
      lists.push_back(rank_graph(store_, entities, kSignalDepth));
    if (hippo && weights.count(Source::Temporal))
      lists.push_back(rank_temporal(store_, working_query, entities, bundle.profile,
                                    kSignalDepth));
    fused = fuse_rrf(lists, weights, store_.config().rrf_k);
    bundle.rounds_used = round;

    if (fused.size() >= 2) {
      double top = fused[0].fused_score, runner = fused[1].fused_score;
      bundle.uncertainty = 1.0 - top / (top + runner);
    } else {
      bundle.uncertainty = 1.0;
    }

    if (round >= bundle.plan.max_rounds) break;
    if (bundle.uncertainty <= store_.config().uncertainty_threshold) break;
    if (fused.empty()) break;
    const EpisodicTrace* top_trace = store_.find_episodic(fused[0].candidate);
    if (!top_trace || top_trace->entities.empty()) break;
    // Expansion: pull the leader's entities into the query and lean harder
    // on the graph signal.
    bool grew = false;
    for (const auto& e : top_trace->entities) {
      if (std::find(entities.begin(), entities.end(), e) == entities.end()) {
        entities.push_back(e);
        working_query += " " + e;
        grew = true;
      }
    }
    if (!grew) break;
    auto git = weights.find(Source::Graph);
    if (git != weights.end()) git->second *= 1.5;
  }

  if (fused.size() > top_k) fused.resize(top_k);
  bundle.fused = std::move(fused);

  if (hippo && weights.count(Source::Temporal) && bundle.profile.temporal >= 0.3) {
    bundle.temporal_answers = storyarc::match_events(store_, working_query, entities);
    if (bundle.temporal_answers.size() > top_k) bundle.temporal_answers.resize(top_k);
  }
  return bundle;
}

consolidation::Report Engine::run_cycle() {
  std::unique_lock<std::shared_mutex> lk(mu_);
  if (store_.frozen()) fail(ErrorCode::FrozenState, "store is frozen");
  auto t0 = std::chrono::steady_clock::now();

  consolidation::Report report;
  auto candidates = consolidation::select_candidates(store_);
  for (const auto& t : candidates) report.selected.push_back(t.id);
  consolidation::consolidate(store_, *adapters_.extractor, candidates,
                             region_enabled(Region::TemporalLobe), report);
  report.pruned = consolidation::forget(store_, protected_trace_seqs(), &report.warnings);

  auto t1 = std::chrono::steady_clock::now();
  report.cycle_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return report;
}

EpisodicTrace Engine::record_access(MemoryId id) {
  std::unique_lock<std::shared_mutex> lk(mu_);
  return bmam::record_access(store_, id);
}

EpisodicTrace Engine::reconsolidate(MemoryId id, const std::optional<std::string>& patch) {
  std::unique_lock<std::shared_mutex> lk(mu_);
  return consolidation::reconsolidate(store_, id, patch);
}

std::vector<EpisodicTrace> Engine::address(const AddressKeys& keys) const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  return bmam::address(store_, keys);
}

metrics::SoulReport Engine::evaluate_probes(const std::vector<metrics::Probe>& probes) const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  if (probes.empty()) fail(ErrorCode::EmptyProbeSet, "no probes to evaluate");

  metrics::SoulReport report;
  size_t temporal_total = 0, temporal_ok = 0, identity_total = 0, identity_ok = 0;
  for (const auto& probe : probes) {
    metrics::ProbeResult result;
    result.probe = probe;
    if (probe.kind == "temporal") {
      ++temporal_total;
      if (auto order = parse_order_probe(probe.query)) {
        TemporalRelation rel = storyarc::query_order(store_, order->entity_a, order->pattern_a,
                                                     order->entity_b, order->pattern_b);
        result.answer = temporal_relation_name(rel);
        result.correct = result.answer == to_lower(trimmed(probe.expected));
      } else {
        auto bundle = retrieve_impl(probe.query, 5);
        if (!bundle.temporal_answers.empty()) {
          const Timestamp& at = bundle.temporal_answers.front().at;
          result.answer = at.to_string();
          auto expected = Timestamp::parse(probe.expected);
          result.correct = expected && matches_at_granularity(at, *expected);
        }
      }
      if (result.correct) ++temporal_ok;
    } else {
      ++identity_total;
      auto bundle = retrieve_impl(probe.query, 5);
      std::string evidence;
      if (bundle.fast_path && bundle.fast_evidence) {
        evidence = bundle.fast_evidence->summary;
      } else if (!bundle.fused.empty()) {
        if (const auto* t = store_.find_episodic(bundle.fused.front().candidate))
          evidence = t->content;
      }
      result.answer = evidence;
      if (!evidence.empty()) {
        auto etoks = tokenize(evidence);
        std::unordered_set<std::string> have(etoks.begin(), etoks.end());
        bool all = true;
        for (const auto& tok : tokenize(probe.expected))
          if (!have.count(tok)) all = false;
        result.correct = all && !tokenize(probe.expected).empty();
      }
      if (result.correct) ++identity_ok;
    }
    report.results.push_back(std::move(result));
  }

  if (temporal_total == 0 || identity_total == 0)
    fail(ErrorCode::EmptyProbeSet, "probe set needs both temporal and identity probes");
  report.temporal_coherence = static_cast<double>(temporal_ok) / temporal_total;
  report.identity_preservation = static_cast<double>(identity_ok) / identity_total;
  report.semantic_consistency = temporal_lobe::semantic_consistency(store_);
  const auto& cfg = store_.config();
  report.soulfulness =
      metrics::soulfulness(report.temporal_coherence, report.semantic_consistency,
                           report.identity_preservation, cfg.soul_alpha, cfg.soul_beta,
                           cfg.soul_gamma);
  return report;
}

std::string Engine::state_digest() const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  return store_.state_digest();
}

json Engine::counts() const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  json j = json::object();
  j["episodic"] = store_.episodic().size();
  j["semantic"] = store_.semantic().size();
  j["timeline"] = store_.timeline().size();
  j["salience"] = store_.salience().size();
  j["procedural"] = store_.procedural().size();
  j["working_memory"] = store_.working_memory().size();
  return j;
}

void Engine::set_region_enabled(Region r, bool enabled) {
  std::unique_lock<std::shared_mutex> lk(mu_);
  if (enabled)
    disabled_.erase(r);
  else
    disabled_.insert(r);
}

bool Engine::region_enabled(Region r) const { return disabled_.count(r) == 0; }

void Engine::set_frozen(bool on) {
  std::unique_lock<std::shared_mutex> lk(mu_);
  store_.set_frozen(on);
}

bool Engine::frozen() const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  return store_.frozen();
}

std::string Engine::config_get(const std::string& key) const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  return store_.config().get(key);
}

void Engine::config_set(const std::string& key, const std::string& value) {
  std::unique_lock<std::shared_mutex> lk(mu_);
  store_.set_config_value(key, value);
}

json Engine::config_json() const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  return store_.config().to_json();
}

ArchiveSummary Engine::save(const std::string& path) const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  return export_archive(store_, path);
}

std::unique_ptr<Engine> Engine::load(const std::string& path) {
  MemoryStore imported = import_archive(path);
  auto engine = std::make_unique<Engine>(imported.config());
  engine->store_ = std::move(imported);
  return engine;
}

namespace {

json ids_json(const std::vector<MemoryId>& v) {
  json a = json::array();
  for (const auto& id : v) a.push_back(id.to_string());
  return a;
}

}  // namespace

json to_json(const IngestSummary& s) {
  return json{{"trace", s.trace.to_string()},
              {"entities", s.entities},
              {"timeline_events", s.timeline_events},
              {"triples", s.triples},
              {"preferences", s.preferences},
              {"salience", s.salience},
              {"protected", s.protected_flag},
              {"conflict", s.conflict}};
}

json to_json(const EvidenceBundle& b) {
  json weights = json::object();
  for (const auto& [src, w] : b.plan.weights) weights[source_name(src)] = w;
  json fused = json::array();
  for (const auto& f : b.fused) {
    json ranks = json::object();
    for (const auto& [src, r] : f.ranks) ranks[source_name(src)] = r;
    fused.push_back(json{{"id", f.candidate.to_string()},
                         {"score", f.fused_score},
                         {"ranks", std::move(ranks)}});
  }
  json answers = json::array();
  for (const auto& a : b.temporal_answers)
    answers.push_back(json{{"trace", a.trace_ref.to_string()},
                           {"entity", a.entity},
                           {"at", a.at.to_string()},
                           {"description", a.description},
                           {"score", a.score}});
  json out{{"profile", json{{"temporal", b.profile.temporal},
                            {"identity", b.profile.identity},
                            {"preference", b.profile.preference},
                            {"factual", b.profile.factual}}},
           {"plan", json{{"weights", std::move(weights)},
                         {"max_rounds", b.plan.max_rounds},
                         {"fast_path", b.plan.fast_path}}},
           {"fused", std::move(fused)},
           {"temporal_answers", std::move(answers)},
           {"fast_path", b.fast_path},
           {"rounds_used", b.rounds_used},
           {"uncertainty", b.uncertainty}};
  if (b.fast_evidence)
    out["fast_evidence"] = json{{"source_trace", b.fast_evidence->source_trace.to_string()},
                                {"summary", b.fast_evidence->summary}};
  else
    out["fast_evidence"] = nullptr;
  return out;
}

json to_json(const consolidation::Report& r) {
  return json{{"selected", ids_json(r.selected)},
              {"facts_created", ids_json(r.facts_created)},
              {"facts_updated", ids_json(r.facts_updated)},
              {"pruned", ids_json(r.pruned)},
              {"warnings", r.warnings},
              {"cycle_ms", r.cycle_ms}};
}

json to_json(const metrics::SoulReport& r) {
  json results = json::array();
  for (const auto& pr : r.results)
    results.push_back(json{{"kind", pr.probe.kind},
                           {"query", pr.probe.query},
                           {"expected", pr.probe.expected},
                           {"answer", pr.answer},
                           {"correct", pr.correct}});
  return json{{"temporal_coherence", r.temporal_coherence},
              {"semantic_consistency", r.semantic_consistency},
              {"identity_preservation", r.identity_preservation},
              {"soulfulness", r.soulfulness},
              {"results", std::move(results)}};
}

}  // namespace bmam
