#pragma once

// Identity-health metrics: probe definitions, the composite wellbeing score
// S = a*T + b*C + g*I, and erosion between two evaluations.

#include <string>
#include <vector>

#include "records.hpp"

namespace bmam {
namespace metrics {

struct Probe {
  std::string kind;  // "temporal" | "identity"
  std::string query;
  std::string expected;
};

struct ProbeResult {
  Probe probe;
  std::string answer;
  bool correct = false;
};

struct SoulReport {
  double temporal_coherence = 0.0;   // T: temporal probes answered correctly
  double semantic_consistency = 0.0; // C: 1 - conflicted live (s,p) share
  double identity_preservation = 0.0;// I: identity probes answered correctly
  double soulfulness = 0.0;          // S = a*T + b*C + g*I
  std::vector<ProbeResult> results;
};

// One probe per line: {"kind": ..., "query": ..., "expected": ...}. Blank
// lines are skipped. Requires at least one temporal and one identity probe
// (EmptyProbeSet otherwise); unknown kinds are ParseError.
std::vector<Probe> parse_probes(const std::string& jsonl);

// Weights must be non-negative and sum to 1 within 1e-9 (BadWeights); each
// component must sit in [0,1] (BadArgument).
double soulfulness(double t, double c, double i, double alpha, double beta, double gamma);

// erosion = earlier score - later score; positive when wellbeing dropped.
double erosion(double s_baseline, double s_now);

}  // namespace metrics
}  // namespace bmam
