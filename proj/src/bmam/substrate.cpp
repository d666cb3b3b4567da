#include "substrate.hpp"

#include <openssl/evp.h>

#include <algorithm>

#include "errors.hpp"

namespace bmam {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) fail(ErrorCode::IoError, "EVP_MD_CTX_new failed");
  if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    fail(ErrorCode::IoError, "sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

namespace {

void check_unit(double v, const char* field) {
  if (!(v >= 0.0 && v <= 1.0))
    fail(ErrorCode::InvariantViolation, std::string(field) + " out of [0,1]");
}

}  // namespace

void validate_record(const EpisodicTrace& t) {
  check_unit(t.salience, "salience");
  check_unit(t.stability, "stability");
  if (t.access_count < 0) fail(ErrorCode::InvariantViolation, "access_count negative");
  if (t.entities.empty() && t.content.empty())
    fail(ErrorCode::InvariantViolation, "content empty with no entities");
}

void validate_record(const SemanticFact& f) {
  check_unit(f.confidence, "confidence");
  if (f.subject.empty() || f.predicate.empty())
    fail(ErrorCode::InvariantViolation, "subject/predicate empty");
  if (f.provenance.empty()) fail(ErrorCode::InvariantViolation, "provenance empty");
}

void validate_record(const TimelineEvent& e) {
  if (e.entity.empty()) fail(ErrorCode::InvariantViolation, "entity empty");
  if (e.seq < 0) fail(ErrorCode::InvariantViolation, "seq negative");
}

void validate_record(const SalienceRecord& s) {
  check_unit(s.novelty, "novelty");
  check_unit(s.conflict, "conflict");
  check_unit(s.feedback, "feedback");
  check_unit(s.aggregate, "aggregate");
}

void validate_record(const ProceduralPattern& p) {
  if (p.key.empty()) fail(ErrorCode::InvariantViolation, "key empty");
  if (p.support < 0 || p.contradictions < 0)
    fail(ErrorCode::InvariantViolation, "support/contradictions negative");
  if (p.fixed_point != (p.support >= 2 && p.contradictions == 0))
    fail(ErrorCode::InvariantViolation, "fixed_point inconsistent with support/contradictions");
}

void validate_record(const WmItem& w) { check_unit(w.salience, "salience"); }

void MemoryStore::require_writable() const {
  if (config_.frozen) fail(ErrorCode::FrozenState, "store is frozen");
}

void MemoryStore::set_config_value(const std::string& key, const std::string& value) {
  if (key != "frozen") require_writable();
  EngineConfig next = config_;
  next.set(key, value);
  next.validate();
  config_ = next;
  bump();
}

void MemoryStore::set_frozen(bool on) {
  config_.frozen = on;
  bump();
}

void MemoryStore::replace_config(EngineConfig cfg) {
  cfg.validate();
  config_ = std::move(cfg);
  bump();
}

namespace {

template <typename Rec>
MemoryId put_impl(std::vector<Rec>& v, Rec r, RecordKind kind, uint64_t* next_seq) {
  validate_record(r);
  r.id = MemoryId{kind, (*next_seq)++};
  v.push_back(std::move(r));
  return v.back().id;
}

}  // namespace

MemoryId MemoryStore::put(EpisodicTrace t) {
  require_writable();
  bump();
  return put_impl(episodic_, std::move(t), RecordKind::Episodic,
                  &next_seq_[static_cast<size_t>(RecordKind::Episodic)]);
}

MemoryId MemoryStore::put(SemanticFact f) {
  require_writable();
  bump();
  return put_impl(semantic_, std::move(f), RecordKind::Semantic,
                  &next_seq_[static_cast<size_t>(RecordKind::Semantic)]);
}

MemoryId MemoryStore::put(TimelineEvent e) {
  require_writable();
  bump();
  return put_impl(timeline_, std::move(e), RecordKind::Timeline,
                  &next_seq_[static_cast<size_t>(RecordKind::Timeline)]);
}

MemoryId MemoryStore::put(SalienceRecord s) {
  require_writable();
  bump();
  return put_impl(salience_, std::move(s), RecordKind::Salience,
                  &next_seq_[static_cast<size_t>(RecordKind::Salience)]);
}

MemoryId MemoryStore::put(ProceduralPattern p) {
  require_writable();
  bump();
  return put_impl(procedural_, std::move(p), RecordKind::Procedural,
                  &next_seq_[static_cast<size_t>(RecordKind::Procedural)]);
}

namespace {

template <typename Rec, typename Out>
Out scan_impl(const std::vector<Rec>& v, const std::function<bool(const Rec&)>& keep) {
  Out out;
  for (const auto& r : v)
    if (keep(r)) out.push_back(r);
  return out;
}

template <typename Rec>
const Rec* find_impl(const std::vector<Rec>& v, MemoryId id) {
  for (const auto& r : v)
    if (r.id == id) return &r;
  return nullptr;
}

template <typename Rec>
Rec* find_mut(std::vector<Rec>& v, MemoryId id) {
  for (auto& r : v)
    if (r.id == id) return &r;
  return nullptr;
}

template <typename Rec>
void erase_impl(std::vector<Rec>& v, MemoryId id, const char* what) {
  const auto it = std::find_if(v.begin(), v.end(), [&](const Rec& r) { return r.id == id; });
  if (it == v.end()) fail(ErrorCode::UnknownId, std::string(what) + ": " + id.to_string());
  v.erase(it);
}

}  // namespace

std::vector<EpisodicTrace> MemoryStore::scan_episodic(
    const std::function<bool(const EpisodicTrace&)>& keep) const {
  return scan_impl<EpisodicTrace, std::vector<EpisodicTrace>>(episodic_, keep);
}

std::vector<SemanticFact> MemoryStore::scan_semantic(
    const std::function<bool(const SemanticFact&)>& keep) const {
  return scan_impl<SemanticFact, std::vector<SemanticFact>>(semantic_, keep);
}

std::vector<TimelineEvent> MemoryStore::scan_timeline(
    const std::function<bool(const TimelineEvent&)>& keep) const {
  return scan_impl<TimelineEvent, std::vector<TimelineEvent>>(timeline_, keep);
}

std::vector<SalienceRecord> MemoryStore::scan_salience(
    const std::function<bool(const SalienceRecord&)>& keep) const {
  return scan_impl<SalienceRecord, std::vector<SalienceRecord>>(salience_, keep);
}

std::vector<ProceduralPattern> MemoryStore::scan_procedural(
    const std::function<bool(const ProceduralPattern&)>& keep) const {
  return scan_impl<ProceduralPattern, std::vector<ProceduralPattern>>(procedural_, keep);
}

const EpisodicTrace* MemoryStore::find_episodic(MemoryId id) const {
  return find_impl(episodic_, id);
}
const SemanticFact* MemoryStore::find_fact(MemoryId id) const { return find_impl(semantic_, id); }
const SalienceRecord* MemoryStore::find_salience(MemoryId id) const {
  return find_impl(salience_, id);
}
const ProceduralPattern* MemoryStore::find_pattern(MemoryId id) const {
  return find_impl(procedural_, id);
}

void MemoryStore::mutate_episodic(MemoryId id, const std::function<void(EpisodicTrace&)>& f) {
  require_writable();
  auto* r = find_mut(episodic_, id);
  if (!r) fail(ErrorCode::UnknownId, "episodic: " + id.to_string());
  f(*r);
  validate_record(*r);
  bump();
}

void MemoryStore::mutate_fact(MemoryId id, const std::function<void(SemanticFact&)>& f) {
  require_writable();
  auto* r = find_mut(semantic_, id);
  if (!r) fail(ErrorCode::UnknownId, "semantic: " + id.to_string());
  f(*r);
  validate_record(*r);
  bump();
}

void MemoryStore::mutate_salience(MemoryId id, const std::function<void(SalienceRecord&)>& f) {
  require_writable();
  auto* r = find_mut(salience_, id);
  if (!r) fail(ErrorCode::UnknownId, "salience: " + id.to_string());
  f(*r);
  validate_record(*r);
  bump();
}

void MemoryStore::mutate_pattern(MemoryId id, const std::function<void(ProceduralPattern&)>& f) {
  require_writable();
  auto* r = find_mut(procedural_, id);
  if (!r) fail(ErrorCode::UnknownId, "procedural: " + id.to_string());
  f(*r);
  validate_record(*r);
  bump();
}

void MemoryStore::rewrite_timeline(const std::function<void(std::vector<TimelineEvent>&)>& f) {
  require_writable();
  f(timeline_);
  for (const auto& e : timeline_) validate_record(e);
  bump();
}

void MemoryStore::erase_episodic(MemoryId id) {
  require_writable();
  erase_impl(episodic_, id, "episodic");
  bump();
}

void MemoryStore::erase_fact(MemoryId id) {
  require_writable();
  erase_impl(semantic_, id, "semantic");
  bump();
}

void MemoryStore::erase_salience(MemoryId id) {
  require_writable();
  erase_impl(salience_, id, "salience");
  bump();
}

void MemoryStore::erase_pattern(MemoryId id) {
  require_writable();
  erase_impl(procedural_, id, "procedural");
  bump();
}

void MemoryStore::replace_working_memory(std::vector<WmItem> items) {
  require_writable();
  if (static_cast<int>(items.size()) > config_.cap_prefrontal_wm)
    fail(ErrorCode::InvariantViolation, "working memory over capacity");
  for (const auto& w : items) validate_record(w);
  wm_ = std::move(items);
  bump();
}

std::string MemoryStore::canonical_store_text() const {
  std::string out;
  out += "config\n";
  out += config_.to_json().dump();
  out += '\n';
  const auto section = [&out](const char* name, const auto& records) {
    out += "store:";
    out += name;
    out += '\n';
    for (const auto& r : records) {
      out += canonical_line(to_json(r));
      out += '\n';
    }
  };
  section("episodic", episodic_);
  section("semantic", semantic_);
  section("timeline", timeline_);
  section("salience", salience_);
  section("procedural", procedural_);
  section("working_memory", wm_);
  return out;
}

std::string MemoryStore::state_digest() const {
  if (digest_revision_ != revision_ || cached_digest_.empty()) {
    cached_digest_ = sha256_hex(canonical_store_text());
    digest_revision_ = revision_;
  }
  return cached_digest_;
}

void MemoryStore::load_raw(EpisodicTrace t) {
  validate_record(t);
  next_seq_[static_cast<size_t>(RecordKind::Episodic)] =
      std::max(next_seq_[static_cast<size_t>(RecordKind::Episodic)], t.id.seq + 1);
  episodic_.push_back(std::move(t));
  bump();
}

void MemoryStore::load_raw(SemanticFact f) {
  validate_record(f);
  next_seq_[static_cast<size_t>(RecordKind::Semantic)] =
      std::max(next_seq_[static_cast<size_t>(RecordKind::Semantic)], f.id.seq + 1);
  semantic_.push_back(std::move(f));
  bump();
}

void MemoryStore::load_raw(TimelineEvent e) {
  validate_record(e);
  next_seq_[static_cast<size_t>(RecordKind::Timeline)] =
      std::max(next_seq_[static_cast<size_t>(RecordKind::Timeline)], e.id.seq + 1);
  timeline_.push_back(std::move(e));
  bump();
}

void MemoryStore::load_raw(SalienceRecord s) {
  validate_record(s);
  next_seq_[static_cast<size_t>(RecordKind::Salience)] =
      std::max(next_seq_[static_cast<size_t>(RecordKind::Salience)], s.id.seq + 1);
  salience_.push_back(std::move(s));
  bump();
}

void MemoryStore::load_raw(ProceduralPattern p) {
  validate_record(p);
  next_seq_[static_cast<size_t>(RecordKind::Procedural)] =
      std::max(next_seq_[static_cast<size_t>(RecordKind::Procedural)], p.id.seq + 1);
  procedural_.push_back(std::move(p));
  bump();
}

void MemoryStore::set_next_seq(RecordKind k, uint64_t v) {
  next_seq_[static_cast<size_t>(k)] = std::max(next_seq_[static_cast<size_t>(k)], v);
}

}  // namespace bmam
