#pragma once

// Engine configuration: region capacities, fusion/revision constants, and
// lifecycle thresholds. Text form is `key=value` lines; every knob here is
// documented in README.md and participates in the state digest.

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace bmam {

struct EngineConfig {
  // Region capacities.
  int cap_hippocampus = 20000;
  int cap_temporal_lobe = 70000;
  int cap_amygdala = 1000;
  int cap_prefrontal_wm = 10;
  int cap_basal_ganglia = 500;

  // Retrieval fusion and lexical scoring.
  double rrf_k = 60.0;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
  int embed_dim = 64;

  // Confidence revision.
  double ema_lambda = 0.3;

  // Soulfulness weights (alpha, beta, gamma); must sum to 1.
  double soul_alpha = 1.0 / 3.0;
  double soul_beta = 1.0 / 3.0;
  double soul_gamma = 1.0 / 3.0;

  // Salience scoring.
  double salience_w_novelty = 0.4;
  double salience_w_conflict = 0.4;
  double salience_w_feedback = 0.2;
  double protection_threshold = 0.8;

  // Consolidation / forgetting.
  int consolidate_min_access = 3;
  double consolidate_min_salience = 0.7;
  double forget_stale_salience = 0.1;
  int forget_horizon_days = 90;
  double retention_w_salience = 0.5;
  double retention_w_stability = 0.3;
  double retention_w_recency = 0.2;

  // Query routing.
  int max_rounds = 2;
  double uncertainty_threshold = 0.45;
  double route_drop_threshold = 0.05;

  bool frozen = false;

  // Throws InvariantViolation naming the offending field.
  void validate() const;

  // Throws BadArgument on unknown key or unparsable value.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  static std::vector<std::string> keys();

  // `key=value` lines in key order; blank lines and `#` comments tolerated on
  // parse.
  std::string dump_text() const;
  static EngineConfig parse_text(const std::string& text);

  nlohmann::json to_json() const;
  static EngineConfig from_json(const nlohmann::json& j);
};

}  // namespace bmam
