#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "errors.hpp"

namespace bmam {

namespace {

using json = nlohmann::json;

struct Entry {
  const char* name;
  std::function<std::string(const EngineConfig&)> get;
  std::function<void(EngineConfig&, const std::string&)> set;
  std::function<json(const EngineConfig&)> as_json;
  std::function<void(EngineConfig&, const json&)> from_json;
};

int parse_int(const std::string& name, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    fail(ErrorCode::BadArgument, "bad integer for " + name + ": " + v);
  return out;
}

double parse_double(const std::string& name, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty() || !std::isfinite(out))
    fail(ErrorCode::BadArgument, "bad number for " + name + ": " + v);
  return out;
}

bool parse_bool(const std::string& name, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(ErrorCode::BadArgument, "bad boolean for " + name + ": " + v);
}

Entry entry(const char* name, int EngineConfig::* m) {
  return {name,
          [m](const EngineConfig& c) { return std::to_string(c.*m); },
          [m, name](EngineConfig& c, const std::string& v) { c.*m = parse_int(name, v); },
          [m](const EngineConfig& c) { return json(c.*m); },
          [m](EngineConfig& c, const json& j) { c.*m = j.get<int>(); }};
}

Entry entry(const char* name, double EngineConfig::* m) {
  return {name,
          [m](const EngineConfig& c) { return json(c.*m).dump(); },
          [m, name](EngineConfig& c, const std::string& v) { c.*m = parse_double(name, v); },
          [m](const EngineConfig& c) { return json(c.*m); },
          [m](EngineConfig& c, const json& j) { c.*m = j.get<double>(); }};
}

Entry entry(const char* name, bool EngineConfig::* m) {
  return {name,
          [m](const EngineConfig& c) { return c.*m ? "true" : "false"; },
          [m, name](EngineConfig& c, const std::string& v) { c.*m = parse_bool(name, v); },
          [m](const EngineConfig& c) { return json(c.*m); },
          [m](EngineConfig& c, const json& j) { c.*m = j.get<bool>(); }};
}

const std::vector<Entry>& entries() {
  // Kept sorted by name; dump_text/keys rely on it.
  static const std::vector<Entry> table = {
      entry("bm25_b", &EngineConfig::bm25_b),
      entry("bm25_k1", &EngineConfig::bm25_k1),
      entry("cap_amygdala", &EngineConfig::cap_amygdala),
      entry("cap_basal_ganglia", &EngineConfig::cap_basal_ganglia),
      entry("cap_hippocampus", &EngineConfig::cap_hippocampus),
      entry("cap_prefrontal_wm", &EngineConfig::cap_prefrontal_wm),
      entry("cap_temporal_lobe", &EngineConfig::cap_temporal_lobe),
      entry("consolidate_min_access", &EngineConfig::consolidate_min_access),
      entry("consolidate_min_salience", &EngineConfig::consolidate_min_salience),
      entry("ema_lambda", &EngineConfig::ema_lambda),
      entry("embed_dim", &EngineConfig::embed_dim),
      entry("forget_horizon_days", &EngineConfig::forget_horizon_days),
      entry("forget_stale_salience", &EngineConfig::forget_stale_salience),
      entry("frozen", &EngineConfig::frozen),
      entry("max_rounds", &EngineConfig::max_rounds),
      entry("protection_threshold", &EngineConfig::protection_threshold),
      entry("retention_w_recency", &EngineConfig::retention_w_recency),
      entry("retention_w_salience", &EngineConfig::retention_w_salience),
      entry("retention_w_stability", &EngineConfig::retention_w_stability),
      entry("route_drop_threshold", &EngineConfig::route_drop_threshold),
      entry("rrf_k", &EngineConfig::rrf_k),
      entry("salience_w_conflict", &EngineConfig::salience_w_conflict),
      entry("salience_w_feedback", &EngineConfig::salience_w_feedback),
      entry("salience_w_novelty", &EngineConfig::salience_w_novelty),
      entry("soul_alpha", &EngineConfig::soul_alpha),
      entry("soul_beta", &EngineConfig::soul_beta),
      entry("soul_gamma", &EngineConfig::soul_gamma),
      entry("uncertainty_threshold", &EngineConfig::uncertainty_threshold),
  };
  return table;
}

const Entry& find_entry(const std::string& key) {
  for (const auto& e : entries())
    if (key == e.name) return e;
  fail(ErrorCode::BadArgument, "unknown config key: " + key);
}

}  // namespace

void EngineConfig::validate() const {
  const auto positive = [](int v, const char* name) {
    if (v <= 0) fail(ErrorCode::InvariantViolation, std::string(name) + " must be positive");
  };
  positive(cap_hippocampus, "cap_hippocampus");
  positive(cap_temporal_lobe, "cap_temporal_lobe");
  positive(cap_amygdala, "cap_amygdala");
  positive(cap_prefrontal_wm, "cap_prefrontal_wm");
  positive(cap_basal_ganglia, "cap_basal_ganglia");
  positive(embed_dim, "embed_dim");
  positive(max_rounds, "max_rounds");
  if (rrf_k <= 0) fail(ErrorCode::InvariantViolation, "rrf_k must be positive");
  if (!(ema_lambda > 0.0 && ema_lambda < 1.0))
    fail(ErrorCode::InvariantViolation, "ema_lambda must be in (0,1)");
  if (soul_alpha < 0 || soul_beta < 0 || soul_gamma < 0)
    fail(ErrorCode::InvariantViolation, "soul weights must be nonnegative");
  if (std::abs(soul_alpha + soul_beta + soul_gamma - 1.0) > 1e-9)
    fail(ErrorCode::InvariantViolation, "soul weights must sum to 1");
}

void EngineConfig::set(const std::string& key, const std::string& value) {
  find_entry(key).set(*this, value);
}

std::string EngineConfig::get(const std::string& key) const { return find_entry(key).get(*this); }

std::vector<std::string> EngineConfig::keys() {
  std::vector<std::string> out;
  for (const auto& e : entries()) out.push_back(e.name);
  return out;
}

std::string EngineConfig::dump_text() const {
  std::string out;
  for (const auto& e : entries()) {
    out += e.name;
    out += '=';
    out += e.get(*this);
    out += '\n';
  }
  return out;
}

EngineConfig EngineConfig::parse_text(const std::string& text) {
  EngineConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::ParseError, "config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = line.substr(first, eq - first);
    const std::string value = line.substr(eq + 1);
    c.set(key, value);
  }
  c.validate();
  return c;
}

nlohmann::json EngineConfig::to_json() const {
  json j = json::object();
  for (const auto& e : entries()) j[e.name] = e.as_json(*this);
  return j;
}

EngineConfig EngineConfig::from_json(const nlohmann::json& j) {
  EngineConfig c;
  for (const auto& e : entries()) {
    const auto it = j.find(e.name);
    if (it == j.end()) fail(ErrorCode::ParseError, std::string("config missing key: ") + e.name);
    e.from_json(c, *it);
  }
  c.validate();
  return c;
}

}  // namespace bmam
