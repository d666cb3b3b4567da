#include "metrics.hpp"

#include <cmath>

#include "errors.hpp"

namespace bmam {
namespace metrics {

std::vector<Probe> parse_probes(const std::string& jsonl) {
  std::vector<Probe> probes;
  size_t temporal = 0, identity = 0;
  size_t pos = 0, line_no = 0;
  while (pos <= jsonl.size()) {
    size_t nl = jsonl.find('\n', pos);
    std::string line = jsonl.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? jsonl.size() + 1 : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(ErrorCode::ParseError, "probe line " + std::to_string(line_no) + ": " + e.what());
    }
    auto str = [&](const char* key) -> std::string {
      auto it = j.find(key);
      if (it == j.end() || !it->is_string())
        fail(ErrorCode::ParseError, "probe line " + std::to_string(line_no) +
                                        ": missing string field '" + key + "'");
      return it->get<std::string>();
    };
    Probe p{str("kind"), str("query"), str("expected")};
    if (p.kind == "temporal")
      ++temporal;
    else if (p.kind == "identity")
      ++identity;
    else
      fail(ErrorCode::ParseError,
           "probe line " + std::to_string(line_no) + ": unknown kind '" + p.kind + "'");
    if (p.query.find_first_not_of(" \t\r\n") == std::string::npos)
      fail(ErrorCode::ParseError, "probe line " + std::to_string(line_no) + ": blank query");
    probes.push_back(std::move(p));
  }
  if (temporal == 0 || identity == 0)
    fail(ErrorCode::EmptyProbeSet,
         "probe set needs at least one temporal and one identity probe");
  return probes;
}

double soulfulness(double t, double c, double i, double alpha, double beta, double gamma) {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0 || std::abs(alpha + beta + gamma - 1.0) > 1e-9)
    fail(ErrorCode::BadWeights, "wellbeing weights must be non-negative and sum to 1");
  for (double v : {t, c, i})
    if (v < 0.0 || v > 1.0) fail(ErrorCode::BadArgument, "metric component outside [0,1]");
  return alpha * t + beta * c + gamma * i;
}

double erosion(double s_baseline, double s_now) { return s_baseline - s_now; }

}  // namespace metrics
}  // namespace bmam
