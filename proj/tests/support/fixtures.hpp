#pragma once

// Conversation corpora with hand-checked extraction behavior plus seeded
// generators for the property suites. Filler sentences are deliberately free
// of capitalized mid-sentence words so they never grow entities.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bmam/hippocampus.hpp"
#include "oracles.hpp"

namespace fixtures {

using bmam::ConversationTurn;

inline ConversationTurn turn(std::string session, std::string text, std::string ts,
                             std::string speaker = "user", double feedback = 0.0) {
  ConversationTurn t;
  t.session_id = std::move(session);
  t.turn = 0;
  t.speaker = std::move(speaker);
  t.text = std::move(text);
  t.timestamp = std::move(ts);
  t.feedback = feedback;
  return t;
}

// Career arc: job start, a hedged wobble, the switch. Traces 1, 5, and 8
// carry entities, so the timeline holds exactly three events.
inline std::vector<ConversationTurn> career_story() {
  return {
      turn("s01", "I just started my new job at Google.", "2023-01-05T10:00"),
      turn("s02", "Settled into a routine this week, nothing worth noting.", "2023-01-20T10:00"),
      turn("s03", "Watched the rain most of the weekend and read a little.", "2023-02-05T10:00"),
      turn("s04", "Slow week again, mostly errands and cooking.", "2023-02-20T10:00"),
      turn("s05", "I'm thinking of leaving Google for a startup.", "2023-03-10T09:00"),
      turn("s06", "Caught a cold, spent the days resting and drinking tea.", "2023-04-15T10:00"),
      turn("s07", "Nothing new, the commute keeps eating the evenings.", "2023-05-10T10:00"),
      turn("s08", "I accepted the offer from TechStartup Inc.", "2023-06-20T11:00"),
  };
}

// Diet drift and return: three first-person statements months apart. Each is
// identity-bearing, so all three consolidate on the first cycle, in id order.
inline std::vector<ConversationTurn> diet_story() {
  return {
      turn("s02", "I'm vegetarian for health reasons.", "2023-02-01T10:00"),
      turn("s15", "I've started eating fish occasionally, pescatarian now.", "2023-05-15T10:00"),
      turn("s28", "Actually, I'm back to being fully vegetarian.", "2023-09-10T10:00"),
  };
}

// One protected milestone buried under `fillers` near-duplicate entries.
inline std::vector<ConversationTurn> thesis_story(int fillers = 33) {
  std::vector<ConversationTurn> turns;
  turns.push_back(turn("s12",
                       "I finally defended my PhD thesis today! Five years of work on neural "
                       "memory models.",
                       "2024-02-05T14:00"));
  for (int i = 1; i <= fillers; ++i) {
    int day = 5 + i;
    int month = 2;
    if (day > 28) {  // roll into March; 2024 detail does not matter here
      day -= 28;
      month = 3;
    }
    char ts[32];
    std::snprintf(ts, sizeof(ts), "2024-%02d-%02dT10:00", month, day);
    turns.push_back(turn("s" + std::to_string(12 + i),
                         "Watched the clouds drift past the office window, day " +
                             std::to_string(i) + ".",
                         ts));
  }
  return turns;
}

// Three coding preferences, each stated in two distinct sessions so every
// pattern reaches support 2 with no contradictions.
inline std::vector<ConversationTurn> workflow_story() {
  return {
      turn("s03", "Always use TypeScript, never plain JavaScript.", "2024-03-01T09:00"),
      turn("s05", "Always use TypeScript, never plain JavaScript.", "2024-03-02T09:00"),
      turn("s07", "Format code with Prettier, 2-space indentation.", "2024-03-03T09:00"),
      turn("s09", "Format code with Prettier, 2-space indentation.", "2024-03-04T09:00"),
      turn("s20", "I prefer functional components over class components in React.",
           "2024-03-05T09:00"),
      turn("s21", "I prefer functional components over class components in React.",
           "2024-03-06T09:00"),
  };
}

inline const std::vector<std::string>& rare_names() {
  static const std::vector<std::string> names = {
      "Zephyrine", "Quenvar",  "Ostrelli",  "Marcanto",  "Velutria",
      "Sandorin",  "Pellagro", "Yvonnex",   "Tremolith", "Caldrune"};
  return names;
}

inline const std::vector<std::string>& project_names() {
  static const std::vector<std::string> names = {
      "Quartzwind", "Brimlock",  "Fennharbor", "Glasspike",  "Harrowfen",
      "Irontide",   "Jasperine", "Kelpridge",  "Lumenvale",  "Mossgrove",
      "Nightquay",  "Opalmere",  "Pinewharf",  "Quillstone", "Rustfall",
      "Saltmarsh",  "Thornbay",  "Umberfield", "Vexhollow",  "Wrenfort",
      "Ashdelve",   "Birchmoor", "Cinderway",  "Duskmantle", "Embergate",
      "Frostholm",  "Gullcrest", "Hazelfork",  "Inkwater",   "Junipond",
      "Kestrelgap", "Larchbend", "Mistrally",  "Northloom",  "Oakenspur",
      "Palecliff",  "Quartmoor", "Ridgewynn",  "Stonevale",  "Tarnbrook"};
  return names;
}

inline const char* month_name(int m) {
  static const char* names[] = {"January",   "February", "March",    "April",
                                "May",       "June",     "July",     "August",
                                "September", "October",  "November", "December"};
  return names[m - 1];
}

struct AblationSuite {
  std::vector<ConversationTurn> turns;  // 10 identity + 40 dated events + 20 fillers
  std::string probes_jsonl;             // 40 temporal probes + 10 identity probes
};

// Identity block first (oldest ids), then the dated project events, then
// filler. Under a tight episodic cap, insertion-order recency makes the
// identity block the default eviction target unless protection holds it.
inline AblationSuite ablation_suite() {
  AblationSuite suite;
  int session = 0;
  for (const auto& name : rare_names()) {
    suite.turns.push_back(turn("a" + std::to_string(++session), "My name is " + name + ".",
                               "2024-01-01T08:00"));
    std::string lower = bmam::to_lower(name);
    suite.probes_jsonl += "{\"kind\": \"identity\", \"query\": \"Tell me what you recall "
                          "regarding " + name + ".\", \"expected\": \"" + lower + "\"}\n";
  }
  const auto& projects = project_names();
  for (size_t i = 0; i < projects.size(); ++i) {
    int year = 2010 + static_cast<int>(i) / 12;
    int month = 1 + static_cast<int>(i) % 12;
    suite.turns.push_back(turn("a" + std::to_string(++session),
                               "The " + projects[i] + " project launched in " +
                                   month_name(month) + " " + std::to_string(year) + ".",
                               "2024-01-02T08:00"));
    char expected[16];
    std::snprintf(expected, sizeof(expected), "%04d-%02d", year, month);
    suite.probes_jsonl += "{\"kind\": \"temporal\", \"query\": \"When did the " + projects[i] +
                          " project launch?\", \"expected\": \"" + expected + "\"}\n";
  }
  for (int i = 1; i <= 20; ++i)
    suite.turns.push_back(turn("a" + std::to_string(++session),
                               "Watched the clouds drift past the window again, entry " +
                                   std::to_string(i) + ".",
                               "2024-01-03T08:00"));
  return suite;
}

// --- Synthetic timelines for brute-force equivalence -------------------------

inline const std::vector<std::string>& timeline_entities() {
  static const std::vector<std::string> pool = {"alpha",    "bravo", "carol", "delta",
                                                "echo",     "fox",   "gull",  "heron"};
  return pool;
}

inline const std::vector<std::string>& timeline_vocab() {
  static const std::vector<std::string> pool = {
      "launch", "merge",  "review", "retire", "audit",  "deploy", "signoff", "freeze",
      "branch", "triage", "budget", "offsit", "survey", "roster", "kickoff", "wrapup"};
  return pool;
}

struct SynthCase {
  std::vector<oracle::SynthEvent> events;  // arrival order == vector order
  std::vector<std::string> entities;       // entities actually used
};

// Known timestamps are unique per entity (enforced by sort_key), so every
// timeline has a single valid order and permutation invariance is testable.
// Roughly one event in ten keeps an unknown timestamp.
inline SynthCase make_timeline_case(std::mt19937_64& rng, size_t max_events = 500) {
  SynthCase out;
  const auto& pool = timeline_entities();
  size_t n_entities = 2 + rng() % 5;
  std::vector<std::string> picks = pool;
  std::shuffle(picks.begin(), picks.end(), rng);
  picks.resize(n_entities);
  out.entities = picks;

  size_t n_events = 20 + rng() % (max_events - 19);
  std::vector<std::set<std::tuple<int, int, int, int, int, int, int>>> used(n_entities);
  const auto& vocab = timeline_vocab();
  for (size_t i = 0; i < n_events; ++i) {
    oracle::SynthEvent e;
    size_t who = rng() % n_entities;
    e.entity = picks[who];
    if (rng() % 10 == 0) {
      e.at = bmam::Timestamp::unknown();
    } else {
      for (int attempt = 0; attempt < 64; ++attempt) {
        bmam::Timestamp t;
        t.year = 2000 + static_cast<int>(rng() % 21);
        int g = static_cast<int>(rng() % 3);
        t.granularity = g == 0   ? bmam::Granularity::Year
                        : g == 1 ? bmam::Granularity::Month
                                 : bmam::Granularity::Day;
        if (g >= 1) t.month = 1 + static_cast<int>(rng() % 12);
        if (g >= 2) t.day = 1 + static_cast<int>(rng() % 28);
        if (used[who].insert(t.sort_key()).second) {
          e.at = t;
          break;
        }
      }
      if (!e.at.is_known()) continue;  // exhausted attempts: drop the event
    }
    size_t n_words = 3 + rng() % 4;
    for (size_t w = 0; w < n_words; ++w) {
      if (w) e.description += ' ';
      e.description += vocab[rng() % vocab.size()];
    }
    e.arrival = out.events.size();
    out.events.push_back(std::move(e));
  }
  return out;
}

}  // namespace fixtures
