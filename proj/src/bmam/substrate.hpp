#pragma once

// Unified storage substrate: every region's records live here, in insertion
// order, behind frozen-mode enforcement and a canonical-serialization digest.
// Capacity is NOT enforced on put — regions call their own enforcement
// explicitly, so tests can stage over-cap states deliberately.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "records.hpp"

namespace bmam {

std::string sha256_hex(std::string_view data);

class MemoryStore {
 public:
  MemoryStore() { config_.validate(); }
  explicit MemoryStore(EngineConfig cfg) : config_(std::move(cfg)) { config_.validate(); }

  const EngineConfig& config() const { return config_; }
  bool frozen() const { return config_.frozen; }

  // `frozen` itself may always be toggled; any other key is a write.
  void set_config_value(const std::string& key, const std::string& value);
  void set_frozen(bool on);
  void replace_config(EngineConfig cfg);

  // Record puts assign the next id for the record's kind.
  MemoryId put(EpisodicTrace t);
  MemoryId put(SemanticFact f);
  MemoryId put(TimelineEvent e);
  MemoryId put(SalienceRecord s);
  MemoryId put(ProceduralPattern p);

  const std::vector<EpisodicTrace>& episodic() const { return episodic_; }
  const std::vector<SemanticFact>& semantic() const { return semantic_; }
  const std::vector<TimelineEvent>& timeline() const { return timeline_; }
  const std::vector<SalienceRecord>& salience() const { return salience_; }
  const std::vector<ProceduralPattern>& procedural() const { return procedural_; }
  const std::vector<WmItem>& working_memory() const { return wm_; }

  std::vector<EpisodicTrace> scan_episodic(
      const std::function<bool(const EpisodicTrace&)>& keep) const;
  std::vector<SemanticFact> scan_semantic(
      const std::function<bool(const SemanticFact&)>& keep) const;
  std::vector<TimelineEvent> scan_timeline(
      const std::function<bool(const TimelineEvent&)>& keep) const;
  std::vector<SalienceRecord> scan_salience(
      const std::function<bool(const SalienceRecord&)>& keep) const;
  std::vector<ProceduralPattern> scan_procedural(
      const std::function<bool(const ProceduralPattern&)>& keep) const;

  const EpisodicTrace* find_episodic(MemoryId id) const;
  const SemanticFact* find_fact(MemoryId id) const;
  const SalienceRecord* find_salience(MemoryId id) const;
  const ProceduralPattern* find_pattern(MemoryId id) const;

  // Guarded in-place mutation; validates the result and bumps the revision.
  void mutate_episodic(MemoryId id, const std::function<void(EpisodicTrace&)>& f);
  void mutate_fact(MemoryId id, const std::function<void(SemanticFact&)>& f);
  void mutate_salience(MemoryId id, const std::function<void(SalienceRecord&)>& f);
  void mutate_pattern(MemoryId id, const std::function<void(ProceduralPattern&)>& f);

  // Whole-timeline rewrite (StoryArc owns ordering/seq assignment).
  void rewrite_timeline(const std::function<void(std::vector<TimelineEvent>&)>& f);

  void erase_episodic(MemoryId id);
  void erase_fact(MemoryId id);
  void erase_salience(MemoryId id);
  void erase_pattern(MemoryId id);

  // Working memory is policy-managed by prefrontal; the substrate stores the
  // list verbatim (order is FIFO position).
  void replace_working_memory(std::vector<WmItem> items);

  uint64_t revision() const { return revision_; }

  uint64_t next_seq(RecordKind k) const { return next_seq_[static_cast<size_t>(k)]; }

  // Canonical serialization: per-store line-delimited records with sorted
  // keys; the digest is SHA-256 over the config plus every store section.
  std::string canonical_store_text() const;
  std::string state_digest() const;

  // Import plumbing: raw record loads bypass frozen checks on a fresh store.
  void load_raw(EpisodicTrace t);
  void load_raw(SemanticFact f);
  void load_raw(TimelineEvent e);
  void load_raw(SalienceRecord s);
  void load_raw(ProceduralPattern p);
  void set_next_seq(RecordKind k, uint64_t v);

 private:
  void require_writable() const;
  void bump() { ++revision_; }

  EngineConfig config_;
  std::vector<EpisodicTrace> episodic_;
  std::vector<SemanticFact> semantic_;
  std::vector<TimelineEvent> timeline_;
  std::vector<SalienceRecord> salience_;
  std::vector<ProceduralPattern> procedural_;
  std::vector<WmItem> wm_;
  uint64_t next_seq_[5] = {0, 0, 0, 0, 0};
  uint64_t revision_ = 0;
  mutable std::string cached_digest_;
  mutable uint64_t digest_revision_ = ~0ull;
};

// Record invariant checks; throw InvariantViolation naming the field.
void validate_record(const EpisodicTrace& t);
void validate_record(const SemanticFact& f);
void validate_record(const TimelineEvent& e);
void validate_record(const SalienceRecord& s);
void validate_record(const ProceduralPattern& p);
void validate_record(const WmItem& w);

}  // namespace bmam
