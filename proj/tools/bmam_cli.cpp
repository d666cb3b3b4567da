// bmam command line. Drives the engine strictly through the C API in
// bmam/bmam.h: every subcommand is expressible over that boundary.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bmam/bmam.h"
#include "json.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFrozen = 3;

int exit_code_for(bmam_status s) {
  switch (s) {
    case BMAM_OK:
      return kExitOk;
    case BMAM_ERR_FROZEN_STATE:
      return kExitFrozen;
    case BMAM_ERR_PARSE:
    case BMAM_ERR_BAD_ARGUMENT:
    case BMAM_ERR_BAD_WEIGHTS:
    case BMAM_ERR_BAD_K:
    case BMAM_ERR_BAD_CONFIDENCE:
    case BMAM_ERR_EMPTY_CONTENT:
    case BMAM_ERR_EMPTY_TEXT:
    case BMAM_ERR_EMPTY_QUERY:
    case BMAM_ERR_EMPTY_PROBE_SET:
    case BMAM_ERR_NO_KEYS:
    case BMAM_ERR_PREDICATE_MISMATCH:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

struct Engine {
  bmam_engine* h = nullptr;
  Engine() = default;
  Engine(Engine&& other) noexcept : h(other.h) { other.h = nullptr; }
  Engine& operator=(Engine&& other) noexcept {
    if (this != &other) {
      bmam_engine_destroy(h);
      h = other.h;
      other.h = nullptr;
    }
    return *this;
  }
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;
  ~Engine() { bmam_engine_destroy(h); }
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { bmam_string_free(s); }
};

[[noreturn]] void die(bmam_status st, const bmam_engine* e, const std::string& context) {
  std::cerr << "error: " << context << ": " << bmam_status_name(st);
  const char* msg = bmam_last_error(e);
  if (msg && *msg) std::cerr << " (" << msg << ")";
  std::cerr << "\n";
  std::exit(exit_code_for(st));
}

struct GlobalOpts {
  std::string store;                  // .bma archive; empty = ephemeral state
  std::string config_file;            // key=value text, fresh stores only
  std::vector<std::string> sets;      // key=value overrides
  std::vector<std::string> disabled;  // region names
  bool json_out = false;
};

bool file_exists(const std::string& p) { return std::ifstream(p).good(); }

std::string read_file_or_die(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << p << "\n";
    std::exit(kExitUsage);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Loads --store when the archive exists, otherwise starts fresh with
// --config; then applies --set overrides and region toggles.
Engine open_engine(const GlobalOpts& g) {
  Engine eng;
  bmam_status st;
  if (!g.store.empty() && file_exists(g.store)) {
    st = bmam_engine_open(g.store.c_str(), &eng.h);
    if (st != BMAM_OK) die(st, nullptr, "open " + g.store);
    if (!g.config_file.empty())
      std::cerr << "note: --config ignored; " << g.store << " carries its own configuration\n";
  } else {
    std::string text;
    if (!g.config_file.empty()) text = read_file_or_die(g.config_file);
    st = bmam_engine_create(text.empty() ? nullptr : text.c_str(), &eng.h);
    if (st != BMAM_OK) die(st, nullptr, "create engine");
  }
  for (const auto& kv : g.sets) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      std::exit(kExitUsage);
    }
    st = bmam_config_set(eng.h, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != BMAM_OK) die(st, eng.h, "--set " + kv);
  }
  for (const auto& region : g.disabled) {
    st = bmam_set_region_enabled(eng.h, region.c_str(), 0);
    if (st != BMAM_OK) die(st, eng.h, "--disable-region " + region);
  }
  if (const char* key = std::getenv("BMAM_ONLINE_API_KEY"); key && *key)
    std::cerr << "note: BMAM_ONLINE_API_KEY set, but this build bundles no online "
                 "adapters; continuing offline\n";
  return eng;
}

void save_back(const GlobalOpts& g, Engine& eng) {
  if (g.store.empty()) return;
  bmam_status st = bmam_engine_save(eng.h, g.store.c_str(), nullptr);
  if (st != BMAM_OK) die(st, eng.h, "save " + g.store);
}

json parse_owned(const OwnedString& s) { return json::parse(s.s ? s.s : "null"); }

void print_counts(const json& counts, const std::string& indent) {
  for (const auto& store : {"episodic", "semantic", "timeline", "salience", "procedural",
                            "working_memory"})
    if (counts.contains(store))
      std::cout << indent << store << ": " << counts[store].get<uint64_t>() << "\n";
}

int cmd_ingest(const GlobalOpts& g, const std::string& file, int cycle_every,
               bool freeze_after) {
  Engine eng = open_engine(g);
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << file << "\n";
    return kExitUsage;
  }
  size_t line_no = 0, turns = 0, cycles = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    bmam_status st = bmam_ingest_turn(eng.h, line.c_str(), nullptr);
    if (st != BMAM_OK) {
      std::cerr << "error: line " << line_no << ": " << bmam_status_name(st);
      const char* msg = bmam_last_error(eng.h);
      if (msg && *msg) std::cerr << " (" << msg << ")";
      std::cerr << "\n";
      return exit_code_for(st);
    }
    ++turns;
    if (cycle_every > 0 && turns % static_cast<size_t>(cycle_every) == 0) {
      st = bmam_run_cycle(eng.h, nullptr);
      if (st != BMAM_OK) die(st, eng.h, "cycle");
      ++cycles;
    }
  }
  if (freeze_after) {
    bmam_status st = bmam_set_frozen(eng.h, 1);
    if (st != BMAM_OK) die(st, eng.h, "freeze");
  }
  OwnedString counts, digest;
  if (auto st = bmam_counts(eng.h, &counts.s); st != BMAM_OK) die(st, eng.h, "counts");
  if (auto st = bmam_state_digest(eng.h, &digest.s); st != BMAM_OK) die(st, eng.h, "digest");
  save_back(g, eng);
  if (g.json_out) {
    json out{{"turns", turns},      {"cycles", cycles},
             {"counts", parse_owned(counts)}, {"digest", digest.s},
             {"frozen", freeze_after}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "ingested " << turns << " turns, ran " << cycles << " cycles\n";
    print_counts(parse_owned(counts), "  ");
    std::cout << "digest: " << digest.s << "\n";
    if (freeze_after) std::cout << "state frozen\n";
  }
  return kExitOk;
}

int cmd_query(const GlobalOpts& g, const std::vector<std::string>& words, size_t top_k) {
  Engine eng = open_engine(g);
  std::string text;
  for (const auto& w : words) {
    if (!text.empty()) text += ' ';
    text += w;
  }
  OwnedString ev;
  bmam_status st = bmam_query(eng.h, text.c_str(), top_k, &ev.s);
  if (st != BMAM_OK) die(st, eng.h, "query");
  if (g.json_out) {
    std::cout << ev.s << "\n";
    return kExitOk;
  }
  json b = parse_owned(ev);
  const json& p = b["profile"];
  std::printf("profile: temporal=%.3f identity=%.3f preference=%.3f factual=%.3f\n",
              p["temporal"].get<double>(), p["identity"].get<double>(),
              p["preference"].get<double>(), p["factual"].get<double>());
  const json& plan = b["plan"];
  std::printf("plan: max_rounds=%d%s weights:", plan["max_rounds"].get<int>(),
              plan["fast_path"].get<bool>() ? " fast-path" : "");
  for (const auto& [name, w] : plan["weights"].items())
    std::printf(" %s=%.3f", name.c_str(), w.get<double>());
  std::printf("\n");
  if (b["fast_path"].get<bool>() && !b["fast_evidence"].is_null()) {
    std::cout << "fast answer from working memory (" << b["fast_evidence"]["source_trace"].get<std::string>()
              << "): " << b["fast_evidence"]["summary"].get<std::string>() << "\n";
  }
  std::cout << "evidence (" << b["fused"].size() << "):\n";
  size_t i = 0;
  for (const auto& f : b["fused"]) {
    std::printf("  %2zu. %-8s score=%.6f ranks:", ++i, f["id"].get<std::string>().c_str(),
                f["score"].get<double>());
    for (const auto& [src, rank] : f["ranks"].items())
      std::printf(" %s=%d", src.c_str(), rank.get<int>());
    std::printf("\n");
  }
  if (!b["temporal_answers"].empty()) {
    std::cout << "temporal answers:\n";
    i = 0;
    for (const auto& a : b["temporal_answers"]) {
      std::printf("  %2zu. %s  %s — %s (%s, score %.1f)\n", ++i,
                  a["at"].get<std::string>().c_str(), a["entity"].get<std::string>().c_str(),
                  a["description"].get<std::string>().c_str(),
                  a["trace"].get<std::string>().c_str(), a["score"].get<double>());
    }
  }
  std::printf("rounds=%d uncertainty=%.3f\n", b["rounds_used"].get<int>(),
              b["uncertainty"].get<double>());
  return kExitOk;
}

int cmd_cycle(const GlobalOpts& g) {
  Engine eng = open_engine(g);
  OwnedString rep;
  bmam_status st = bmam_run_cycle(eng.h, &rep.s);
  if (st != BMAM_OK) die(st, eng.h, "cycle");
  save_back(g, eng);
  if (g.json_out) {
    std::cout << rep.s << "\n";
    return kExitOk;
  }
  json r = parse_owned(rep);
  std::cout << "cycle: selected " << r["selected"].size() << ", facts created "
            << r["facts_created"].size() << ", facts updated " << r["facts_updated"].size()
            << ", pruned " << r["pruned"].size() << " ("
            << r["cycle_ms"].get<double>() << " ms)\n";
  for (const auto& w : r["warnings"]) std::cout << "  warning: " << w.get<std::string>() << "\n";
  return kExitOk;
}

int cmd_metrics(const GlobalOpts& g, const std::string& probe_file,
                const std::string& baseline) {
  Engine eng = open_engine(g);
  std::string probes = read_file_or_die(probe_file);
  OwnedString rep;
  bmam_status st = bmam_evaluate_probes(eng.h, probes.c_str(), &rep.s);
  if (st != BMAM_OK) die(st, eng.h, "probes");
  json cur = parse_owned(rep);
  json base;
  bool have_base = false;
  double erosion = 0.0;
  if (!baseline.empty()) {
    Engine ref;
    st = bmam_engine_open(baseline.c_str(), &ref.h);
    if (st != BMAM_OK) die(st, nullptr, "open baseline " + baseline);
    OwnedString brep;
    st = bmam_evaluate_probes(ref.h, probes.c_str(), &brep.s);
    if (st != BMAM_OK) die(st, ref.h, "baseline probes");
    base = parse_owned(brep);
    erosion = base["soulfulness"].get<double>() - cur["soulfulness"].get<double>();
    have_base = true;
  }
  if (g.json_out) {
    json out{{"current", cur}};
    out["baseline"] = have_base ? base : json(nullptr);
    out["erosion"] = have_base ? json(erosion) : json(nullptr);
    std::cout << out.dump() << "\n";
    return kExitOk;
  }
  std::printf("T=%.4f C=%.4f I=%.4f S=%.4f\n", cur["temporal_coherence"].get<double>(),
              cur["semantic_consistency"].get<double>(),
              cur["identity_preservation"].get<double>(), cur["soulfulness"].get<double>());
  size_t correct = 0;
  for (const auto& r : cur["results"]) {
    if (r["correct"].get<bool>()) {
      ++correct;
      continue;
    }
    std::cout << "  miss [" << r["kind"].get<std::string>() << "] "
              << r["query"].get<std::string>() << " -> '" << r["answer"].get<std::string>()
              << "' expected '" << r["expected"].get<std::string>() << "'\n";
  }
  std::cout << "probes: " << correct << "/" << cur["results"].size() << " correct\n";
  if (have_base)
    std::printf("baseline S=%.4f  E=%.4f\n", base["soulfulness"].get<double>(), erosion);
  return kExitOk;
}

int cmd_export(const GlobalOpts& g, const std::string& dest) {
  Engine eng = open_engine(g);
  OwnedString sum;
  bmam_status st = bmam_engine_save(eng.h, dest.c_str(), &sum.s);
  if (st != BMAM_OK) die(st, eng.h, "export " + dest);
  if (g.json_out) {
    std::cout << sum.s << "\n";
    return kExitOk;
  }
  json j = parse_owned(sum);
  std::cout << "exported " << j["path"].get<std::string>() << "\n";
  print_counts(j["counts"], "  ");
  std::cout << "digest: " << j["digest"].get<std::string>() << "\n";
  return kExitOk;
}

int cmd_import(const GlobalOpts& g, const std::string& src) {
  if (g.store.empty()) {
    std::cerr << "error: import requires --store to receive the archive\n";
    return kExitUsage;
  }
  Engine eng;
  bmam_status st = bmam_engine_open(src.c_str(), &eng.h);
  if (st != BMAM_OK) die(st, nullptr, "import " + src);
  OwnedString sum;
  st = bmam_engine_save(eng.h, g.store.c_str(), &sum.s);
  if (st != BMAM_OK) die(st, eng.h, "save " + g.store);
  if (g.json_out) {
    std::cout << sum.s << "\n";
    return kExitOk;
  }
  json j = parse_owned(sum);
  std::cout << "imported " << src << " -> " << j["path"].get<std::string>() << "\n";
  print_counts(j["counts"], "  ");
  std::cout << "digest: " << j["digest"].get<std::string>() << "\n";
  return kExitOk;
}

int cmd_config(const GlobalOpts& g, const std::string& get_key, const std::string& set_key,
               const std::string& set_value) {
  Engine eng = open_engine(g);
  if (!set_key.empty()) {
    bmam_status st = bmam_config_set(eng.h, set_key.c_str(), set_value.c_str());
    if (st != BMAM_OK) die(st, eng.h, "config set " + set_key);
    save_back(g, eng);
    std::cout << set_key << " = " << set_value << "\n";
    return kExitOk;
  }
  if (!get_key.empty()) {
    OwnedString v;
    bmam_status st = bmam_config_get(eng.h, get_key.c_str(), &v.s);
    if (st != BMAM_OK) die(st, eng.h, "config get " + get_key);
    std::cout << v.s << "\n";
    return kExitOk;
  }
  OwnedString dump;
  bmam_status st = g.json_out ? bmam_config_json(eng.h, &dump.s) : bmam_config_text(eng.h, &dump.s);
  if (st != BMAM_OK) die(st, eng.h, "config");
  std::cout << dump.s;
  if (g.json_out) std::cout << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bmam — brain-region-inspired memory engine for long-horizon agents"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--store", g.store, "state archive (.bma), loaded if present and saved after mutations");
  app.add_option("--config", g.config_file, "configuration file (key=value lines) for fresh stores");
  app.add_option("--set", g.sets, "configuration override key=value (repeatable)");
  app.add_option("--disable-region", g.disabled,
                 "disable a region: hippocampus|temporal_lobe|amygdala|prefrontal|basal_ganglia (repeatable)");
  app.add_flag("--json", g.json_out, "machine-readable output");

  auto* ingest = app.add_subcommand("ingest", "ingest line-delimited conversation turns");
  ingest->fallthrough();
  std::string ingest_file;
  int cycle_every = 0;
  bool freeze_after = false;
  ingest->add_option("file", ingest_file, "JSONL turn file")->required();
  ingest->add_option("--cycle-every", cycle_every, "run a maintenance cycle every N turns");
  ingest->add_flag("--freeze-after", freeze_after, "freeze the store after the last turn");

  auto* query = app.add_subcommand("query", "retrieve evidence for a question");
  query->fallthrough();
  std::vector<std::string> query_words;
  size_t top_k = 10;
  query->add_option("text", query_words, "query text");
  query->add_option("--top-k", top_k, "fused results to keep");

  auto* cycle = app.add_subcommand("cycle", "run one consolidation/forgetting cycle");
  cycle->fallthrough();

  auto* metrics = app.add_subcommand("metrics", "score a probe suite (soulfulness and components)");
  metrics->fallthrough();
  std::string probe_file, baseline;
  metrics->add_option("probes", probe_file, "JSONL probe file")->required();
  metrics->add_option("--baseline", baseline, "archive to diff against (erosion E)");

  auto* exp = app.add_subcommand("export", "write the current state as a .bma archive");
  exp->fallthrough();
  std::string export_dest;
  exp->add_option("dest", export_dest, "destination archive path")->required();

  auto* imp = app.add_subcommand("import", "copy an archive into --store");
  imp->fallthrough();
  std::string import_src;
  imp->add_option("src", import_src, "source archive path")->required();

  auto* config = app.add_subcommand("config", "show, get, or set configuration");
  config->fallthrough();
  std::string cfg_get, cfg_set_key, cfg_set_value;
  config->add_option("--get", cfg_get, "print one key");
  auto* set_opt = config->add_option("--set-key", cfg_set_key, "key to write (with --value)");
  config->add_option("--value", cfg_set_value, "value for --set-key")->needs(set_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(ingest)) return cmd_ingest(g, ingest_file, cycle_every, freeze_after);
    if (app.got_subcommand(query)) return cmd_query(g, query_words, top_k);
    if (app.got_subcommand(cycle)) return cmd_cycle(g);
    if (app.got_subcommand(metrics)) return cmd_metrics(g, probe_file, baseline);
    if (app.got_subcommand(exp)) return cmd_export(g, export_dest);
    if (app.got_subcommand(imp)) return cmd_import(g, import_src);
    if (app.got_subcommand(config)) return cmd_config(g, cfg_get, cfg_set_key, cfg_set_value);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
