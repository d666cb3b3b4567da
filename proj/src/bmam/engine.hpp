#pragma once

// The engine ties the substrate, regions, and adapters together under one
// reader/writer lock: turn ingestion, multi-signal retrieval, maintenance
// cycles, probes, and archive round-trips.

#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <unordered_map>

#include "adapters.hpp"
#include "archive.hpp"
#include "bm25.hpp"
#include "consolidation.hpp"
#include "hippocampus.hpp"
#include "metrics.hpp"
#include "prefrontal.hpp"
#include "retrieval.hpp"
#include "storyarc.hpp"
#include "substrate.hpp"

namespace bmam {

enum class Region { Hippocampus, TemporalLobe, Amygdala, Prefrontal, BasalGanglia };

const char* region_name(Region r);
std::optional<Region> parse_region(const std::string& name);

struct IngestSummary {
  MemoryId trace;
  size_t entities = 0;
  size_t timeline_events = 0;
  size_t triples = 0;      // extracted now; folded into facts at cycle time
  size_t preferences = 0;
  double salience = 0.0;
  bool protected_flag = false;
  bool conflict = false;
};

struct EvidenceBundle {
  QueryProfile profile;
  RetrievalPlan plan;
  std::vector<FusedResult> fused;
  std::vector<storyarc::TemporalAnswer> temporal_answers;
  std::optional<WmItem> fast_evidence;
  bool fast_path = false;
  int rounds_used = 0;  // 0 when the fast path answered
  double uncertainty = 1.0;
};

// Wire forms used by the C layer and CLI; schemas documented in the README.
json to_json(const IngestSummary& s);
json to_json(const EvidenceBundle& b);
json to_json(const consolidation::Report& r);
json to_json(const metrics::SoulReport& r);

class Engine {
 public:
  explicit Engine(EngineConfig cfg = {}, AdapterSet adapters = {});

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Full turn pipeline: extract, encode, score salience (with conflict and
  // protection), index the timeline, observe preferences. Region toggles
  // gate each stage.
  IngestSummary ingest_turn(const ConversationTurn& turn);

  // Read-only: never touches access counts or any store state.
  EvidenceBundle retrieve(const std::string& query, size_t top_k) const;

  // select -> consolidate -> forget.
  consolidation::Report run_cycle();

  EpisodicTrace record_access(MemoryId id);
  EpisodicTrace reconsolidate(MemoryId id, const std::optional<std::string>& patch);
  std::vector<EpisodicTrace> address(const AddressKeys& keys) const;

  metrics::SoulReport evaluate_probes(const std::vector<metrics::Probe>& probes) const;

  std::string state_digest() const;
  json counts() const;

  void set_region_enabled(Region r, bool enabled);
  bool region_enabled(Region r) const;

  void set_frozen(bool on);
  bool frozen() const;
  std::string config_get(const std::string& key) const;
  void config_set(const std::string& key, const std::string& value);
  json config_json() const;

  ArchiveSummary save(const std::string& path) const;
  static std::unique_ptr<Engine> load(const std::string& path);

  const AdapterSet& adapters() const { return adapters_; }

  // Unsynchronized store access for single-threaded tests and tools.
  MemoryStore& store() { return store_; }
  const MemoryStore& store() const { return store_; }

 private:
  EvidenceBundle retrieve_impl(const std::string& query, size_t top_k) const;
  std::vector<std::string> query_entities(const std::string& query) const;
  std::vector<double> cached_embedding(const EpisodicTrace& t) const;
  void ensure_indexes() const;
  std::set<uint64_t> protected_trace_seqs() const;

  MemoryStore store_;
  AdapterSet adapters_;
  std::set<Region> disabled_;

  mutable std::shared_mutex mu_;

  // Index caches; guarded by cache_mu_ (shared-lock holders also rebuild).
  mutable std::mutex cache_mu_;
  mutable std::unordered_map<uint64_t, std::pair<uint64_t, std::vector<double>>> embed_cache_;
  mutable uint64_t index_revision_ = ~0ull;
  mutable std::unique_ptr<Bm25Index> bm25_;
  mutable std::vector<MemoryId> dense_ids_;
  mutable std::vector<std::vector<double>> dense_vecs_;
};

}  // namespace bmam
