#include "records.hpp"

#include "errors.hpp"

namespace bmam {

namespace {

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(ErrorCode::ParseError, std::string("missing field: ") + key);
  return *it;
}

std::string str_field(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) fail(ErrorCode::ParseError, std::string("expected string: ") + key);
  return v.get<std::string>();
}

double num_field(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number()) fail(ErrorCode::ParseError, std::string("expected number: ") + key);
  return v.get<double>();
}

int int_field(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) fail(ErrorCode::ParseError, std::string("expected integer: ") + key);
  return v.get<int>();
}

bool bool_field(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_boolean()) fail(ErrorCode::ParseError, std::string("expected bool: ") + key);
  return v.get<bool>();
}

Timestamp ts_field(const json& j, const char* key) {
  const auto t = Timestamp::parse(str_field(j, key));
  if (!t) fail(ErrorCode::ParseError, std::string("bad timestamp in: ") + key);
  return *t;
}

MemoryId id_field(const json& j, const char* key) {
  const auto id = MemoryId::parse(str_field(j, key));
  if (!id) fail(ErrorCode::ParseError, std::string("bad id in: ") + key);
  return *id;
}

}  // namespace

json to_json(const EpisodicTrace& t) {
  json exprs = json::array();
  for (const auto& e : t.temporal_expressions)
    exprs.push_back({{"at", e.at.to_string()}, {"surface", e.surface}});
  return {
      {"access_count", t.access_count},
      {"consolidated", t.consolidated},
      {"content", t.content},
      {"entities", t.entities},
      {"event_time", t.event_time.to_string()},
      {"id", t.id.to_string()},
      {"ingest_time", t.ingest_time.to_string()},
      {"salience", t.salience},
      {"session_id", t.session_id},
      {"speaker", t.speaker},
      {"stability", t.stability},
      {"temporal_expressions", exprs},
  };
}

EpisodicTrace episodic_from_json(const json& j) {
  EpisodicTrace t;
  t.id = id_field(j, "id");
  t.session_id = str_field(j, "session_id");
  t.speaker = str_field(j, "speaker");
  t.content = str_field(j, "content");
  t.ingest_time = ts_field(j, "ingest_time");
  t.event_time = ts_field(j, "event_time");
  const auto& ents = field(j, "entities");
  if (!ents.is_array()) fail(ErrorCode::ParseError, "entities must be an array");
  for (const auto& e : ents) t.entities.push_back(e.get<std::string>());
  const auto& exprs = field(j, "temporal_expressions");
  if (!exprs.is_array()) fail(ErrorCode::ParseError, "temporal_expressions must be an array");
  for (const auto& e : exprs) {
    TemporalExpression x;
    x.surface = str_field(e, "surface");
    x.at = ts_field(e, "at");
    t.temporal_expressions.push_back(std::move(x));
  }
  t.salience = num_field(j, "salience");
  t.stability = num_field(j, "stability");
  t.access_count = int_field(j, "access_count");
  t.consolidated = bool_field(j, "consolidated");
  return t;
}

json to_json(const SemanticFact& f) {
  json prov = json::array();
  for (const auto& p : f.provenance) prov.push_back(p.to_string());
  return {
      {"confidence", f.confidence},
      {"created_at", f.created_at.to_string()},
      {"id", f.id.to_string()},
      {"object", f.object},
      {"predicate", f.predicate},
      {"provenance", prov},
      {"subject", f.subject},
      {"superseded_by", f.has_superseded_by ? json(f.superseded_by.to_string()) : json(nullptr)},
      {"updated_at", f.updated_at.to_string()},
  };
}

SemanticFact fact_from_json(const json& j) {
  SemanticFact f;
  f.id = id_field(j, "id");
  f.subject = str_field(j, "subject");
  f.predicate = str_field(j, "predicate");
  f.object = str_field(j, "object");
  f.confidence = num_field(j, "confidence");
  const auto& prov = field(j, "provenance");
  if (!prov.is_array()) fail(ErrorCode::ParseError, "provenance must be an array");
  for (const auto& p : prov) {
    const auto id = MemoryId::parse(p.get<std::string>());
    if (!id) fail(ErrorCode::ParseError, "bad provenance id");
    f.provenance.push_back(*id);
  }
  const auto& sb = field(j, "superseded_by");
  if (sb.is_null()) {
    f.has_superseded_by = false;
  } else {
    const auto id = MemoryId::parse(sb.get<std::string>());
    if (!id) fail(ErrorCode::ParseError, "bad superseded_by id");
    f.superseded_by = *id;
    f.has_superseded_by = true;
  }
  f.created_at = ts_field(j, "created_at");
  f.updated_at = ts_field(j, "updated_at");
  return f;
}

json to_json(const TimelineEvent& e) {
  return {
      {"at", e.at.to_string()},
      {"description", e.description},
      {"entity", e.entity},
      {"id", e.id.to_string()},
      {"seq", e.seq},
      {"trace_ref", e.trace_ref.to_string()},
  };
}

TimelineEvent timeline_event_from_json(const json& j) {
  TimelineEvent e;
  e.id = id_field(j, "id");
  e.entity = str_field(j, "entity");
  e.at = ts_field(j, "at");
  e.seq = int_field(j, "seq");
  e.description = str_field(j, "description");
  e.trace_ref = id_field(j, "trace_ref");
  return e;
}

json to_json(const SalienceRecord& s) {
  return {
      {"aggregate", s.aggregate},
      {"conflict", s.conflict},
      {"feedback", s.feedback},
      {"id", s.id.to_string()},
      {"novelty", s.novelty},
      {"protected", s.protected_flag},
      {"reason", s.reason},
      {"trace_ref", s.trace_ref.to_string()},
  };
}

SalienceRecord salience_from_json(const json& j) {
  SalienceRecord s;
  s.id = id_field(j, "id");
  s.trace_ref = id_field(j, "trace_ref");
  s.novelty = num_field(j, "novelty");
  s.conflict = num_field(j, "conflict");
  s.feedback = num_field(j, "feedback");
  s.aggregate = num_field(j, "aggregate");
  s.protected_flag = bool_field(j, "protected");
  s.reason = str_field(j, "reason");
  return s;
}

json to_json(const ProceduralPattern& p) {
  return {
      {"contradictions", p.contradictions},
      {"fixed_point", p.fixed_point},
      {"id", p.id.to_string()},
      {"key", p.key},
      {"sessions", p.sessions},
      {"statement", p.statement},
      {"support", p.support},
      {"value", p.value},
  };
}

ProceduralPattern pattern_from_json(const json& j) {
  ProceduralPattern p;
  p.id = id_field(j, "id");
  p.key = str_field(j, "key");
  p.value = str_field(j, "value");
  p.statement = str_field(j, "statement");
  const auto& sess = field(j, "sessions");
  if (!sess.is_array()) fail(ErrorCode::ParseError, "sessions must be an array");
  for (const auto& s : sess) p.sessions.push_back(s.get<std::string>());
  p.support = int_field(j, "support");
  p.contradictions = int_field(j, "contradictions");
  p.fixed_point = bool_field(j, "fixed_point");
  return p;
}

json to_json(const WmItem& w) {
  return {
      {"inserted_at", w.inserted_at.to_string()},
      {"salience", w.salience},
      {"source_trace", w.source_trace.to_string()},
      {"summary", w.summary},
  };
}

WmItem wm_item_from_json(const json& j) {
  WmItem w;
  w.source_trace = id_field(j, "source_trace");
  w.summary = str_field(j, "summary");
  w.salience = num_field(j, "salience");
  w.inserted_at = ts_field(j, "inserted_at");
  return w;
}

std::string canonical_line(const json& j) { return j.dump(); }

}  // namespace bmam
