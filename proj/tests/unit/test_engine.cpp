#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bmam/engine.hpp"
#include "bmam/errors.hpp"
#include "bmam/temporal_lobe.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "testutil.hpp"

using namespace bmam;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const BmamError& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

std::vector<IngestSummary> feed(Engine& e, const std::vector<ConversationTurn>& turns) {
  std::vector<IngestSummary> out;
  for (const auto& t : turns) out.push_back(e.ingest_turn(t));
  return out;
}

}  // namespace

TEST_CASE("turn ingestion reports what each stage saw") {
  Engine e;
  const auto s = feed(e, fixtures::career_story());
  REQUIRE(s.size() == 8);

  // "I just started my new job at Google."
  CHECK(s[0].entities == 1);
  CHECK(s[0].timeline_events == 1);
  CHECK(s[0].triples == 1);
  CHECK(s[0].preferences == 0);
  CHECK(s[0].protected_flag);    // self-statements are identity-bearing
  CHECK(s[0].salience == 0.8);   // novelty 1.0 scores 0.4, protection lifts it
  CHECK_FALSE(s[0].conflict);

  // "Settled into a routine this week, nothing worth noting."
  CHECK(s[1].entities == 0);
  CHECK(s[1].timeline_events == 0);
  CHECK(s[1].triples == 0);
  CHECK_FALSE(s[1].protected_flag);

  // "I'm thinking of leaving Google for a startup." -- hedged, no triple
  CHECK(s[4].entities == 1);
  CHECK(s[4].timeline_events == 1);
  CHECK(s[4].triples == 0);

  // "I accepted the offer from TechStartup Inc."
  CHECK(s[7].entities == 1);
  CHECK(s[7].timeline_events == 1);
  CHECK(s[7].triples == 1);
  CHECK(s[7].protected_flag);

  const auto c = e.counts();
  CHECK(c["episodic"] == 8);
  CHECK(c["semantic"] == 0);  // facts appear only at cycle time
  CHECK(c["timeline"] == 3);
  CHECK(c["salience"] == 8);
  CHECK(c["procedural"] == 0);
  CHECK(c["working_memory"] == 8);

  SUBCASE("blank text, bad timestamps, and unknown timestamps") {
    CHECK(code_of([&] { e.ingest_turn(fixtures::turn("s1", "  ", "2024-01-01")); }) ==
          ErrorCode::EmptyContent);
    CHECK(code_of([&] { e.ingest_turn(fixtures::turn("s1", "hello", "not-a-date")); }) ==
          ErrorCode::ParseError);
    CHECK(code_of([&] { e.ingest_turn(fixtures::turn("s1", "hello", "unknown")); }) ==
          ErrorCode::Ok);
  }
}

TEST_CASE("identical histories give identical digests") {
  Engine a, b;
  feed(a, fixtures::career_story());
  feed(b, fixtures::career_story());
  CHECK(a.state_digest() == b.state_digest());

  b.ingest_turn(fixtures::turn("s99", "one more remark", "2023-07-01"));
  CHECK(a.state_digest() != b.state_digest());
}

TEST_CASE("retrieval answers the departure question and leaves no trace") {
  Engine e;
  feed(e, fixtures::career_story());
  const auto before = e.state_digest();

  const auto bundle = e.retrieve("when did i leave google", 5);
  CHECK(bundle.profile.temporal >= 0.3);
  CHECK_FALSE(bundle.fast_path);
  CHECK(bundle.rounds_used >= 1);
  REQUIRE(!bundle.temporal_answers.empty());
  const auto& top = bundle.temporal_answers.front();
  CHECK(top.at.year == 2023);
  CHECK(top.at.month == 6);
  CHECK(top.entity == "techstartup inc");
  CHECK(!bundle.fused.empty());
  CHECK(bundle.uncertainty >= 0.0);
  CHECK(bundle.uncertainty <= 1.0);

  for (int i = 0; i < 10; ++i) e.retrieve("what happened with google", 3);
  CHECK(e.state_digest() == before);

  SUBCASE("queries need at least one token") {
    CHECK(code_of([&] { e.retrieve("", 5); }) == ErrorCode::EmptyQuery);
    CHECK(code_of([&] { e.retrieve(" ?! ", 5); }) == ErrorCode::EmptyQuery);
  }
  SUBCASE("top_k truncates the fused list") {
    const auto wide = e.retrieve("google", 100);
    const auto narrow = e.retrieve("google", 1);
    CHECK(narrow.fused.size() == 1);
    CHECK(wide.fused.size() > 1);
    CHECK(narrow.fused[0].candidate == wide.fused[0].candidate);
  }
}

TEST_CASE("region names round-trip and gate both ingest and query stages") {
  CHECK(std::string(region_name(Region::Hippocampus)) == "hippocampus");
  CHECK(std::string(region_name(Region::TemporalLobe)) == "temporal_lobe");
  CHECK(std::string(region_name(Region::Amygdala)) == "amygdala");
  CHECK(std::string(region_name(Region::Prefrontal)) == "prefrontal");
  CHECK(std::string(region_name(Region::BasalGanglia)) == "basal_ganglia");
  for (Region r : {Region::Hippocampus, Region::TemporalLobe, Region::Amygdala,
                   Region::Prefrontal, Region::BasalGanglia})
    CHECK(parse_region(region_name(r)) == r);
  CHECK(!parse_region("cerebellum"));

  SUBCASE("hippocampus off stores the raw utterance only") {
    Engine e;
    e.set_region_enabled(Region::Hippocampus, false);
    CHECK_FALSE(e.region_enabled(Region::Hippocampus));
    const auto s = e.ingest_turn(fixtures::career_story()[0]);
    CHECK(s.entities == 0);
    CHECK(s.timeline_events == 0);
    CHECK(s.triples == 1);  // extraction still reports what it saw
    const auto c = e.counts();
    CHECK(c["episodic"] == 1);
    CHECK(c["timeline"] == 0);
    CHECK(c["working_memory"] == 0);
    const auto* t = e.store().find_episodic(s.trace);
    REQUIRE(t);
    CHECK(t->content == fixtures::career_story()[0].text);
    CHECK(t->entities.empty());
  }
  SUBCASE("hippocampus off at query time silences timeline evidence") {
    Engine e;
    feed(e, fixtures::career_story());
    e.set_region_enabled(Region::Hippocampus, false);
    const auto bundle = e.retrieve("when did i leave google", 5);
    CHECK(bundle.temporal_answers.empty());
    for (const auto& f : bundle.fused) CHECK(f.ranks.count(Source::Temporal) == 0);
    e.set_region_enabled(Region::Hippocampus, true);
    CHECK_FALSE(e.retrieve("when did i leave google", 5).temporal_answers.empty());
  }
  SUBCASE("temporal lobe off suppresses fact writes and the graph signal") {
    Engine e;
    e.set_region_enabled(Region::TemporalLobe, false);
    feed(e, fixtures::career_story());
    e.run_cycle();
    CHECK(e.counts()["semantic"] == 0);
    const auto bundle = e.retrieve("where does the user work google", 5);
    for (const auto& f : bundle.fused) CHECK(f.ranks.count(Source::Graph) == 0);
  }
  SUBCASE("amygdala off leaves traces unsalient and unprotected") {
    Engine e;
    e.set_region_enabled(Region::Amygdala, false);
    const auto s = e.ingest_turn(fixtures::career_story()[0]);
    CHECK(s.salience == 0.0);
    CHECK_FALSE(s.protected_flag);
    CHECK(e.counts()["salience"] == 0);
  }
  SUBCASE("basal ganglia off ignores preferences") {
    Engine e;
    e.set_region_enabled(Region::BasalGanglia, false);
    const auto s = e.ingest_turn(fixtures::workflow_story()[0]);
    CHECK(s.preferences > 0);
    CHECK(e.counts()["procedural"] == 0);
  }
  SUBCASE("prefrontal off uses flat weights and one round") {
    Engine e;
    feed(e, fixtures::career_story());
    e.set_region_enabled(Region::Prefrontal, false);
    const auto bundle = e.retrieve("when did i leave google", 5);
    CHECK(bundle.plan.max_rounds == 1);
    CHECK(bundle.plan.weights.size() == 4);
    CHECK(bundle.profile.temporal == 0.5);
  }
}

TEST_CASE("freezing blocks writes but not reads") {
  Engine e;
  feed(e, fixtures::career_story());
  const auto digest = e.state_digest();

  e.set_frozen(true);
  CHECK(e.frozen());
  CHECK(code_of([&] { e.ingest_turn(fixtures::turn("s9", "hello there", "2023-07-01")); }) ==
        ErrorCode::FrozenState);
  CHECK(code_of([&] { e.run_cycle(); }) == ErrorCode::FrozenState);
  const auto first = e.store().episodic().front().id;
  CHECK(code_of([&] { e.record_access(first); }) == ErrorCode::FrozenState);

  for (int i = 0; i < 5; ++i) {
    CHECK(!e.retrieve("when did i leave google", 5).temporal_answers.empty());
    e.counts();
  }
  CHECK(e.state_digest() == digest);

  e.set_frozen(false);
  CHECK_FALSE(e.frozen());
  CHECK(code_of([&] { e.ingest_turn(fixtures::turn("s9", "hello there", "2023-07-01")); }) ==
        ErrorCode::Ok);
}

TEST_CASE("a maintenance cycle folds the career arc into live facts") {
  Engine e;
  feed(e, fixtures::career_story());
  const auto report = e.run_cycle();

  // The two identity-bearing turns are the only candidates (salience 0.8).
  REQUIRE(report.selected.size() == 2);
  CHECK(report.selected[0] == e.store().episodic()[0].id);
  CHECK(report.selected[1] == e.store().episodic()[7].id);
  CHECK(report.facts_created.size() == 2);
  CHECK(report.pruned.empty());

  const auto live = temporal_lobe::query_facts(e.store(), "user", "employer");
  REQUIRE(live.size() == 1);
  CHECK(live[0].object == "techstartup inc");
  const auto all = temporal_lobe::query_facts(e.store(), "user", "employer", true);
  CHECK(all.size() == 2);  // the google fact is superseded, not erased

  SUBCASE("the next cycle finds nothing new") {
    const auto again = e.run_cycle();
    CHECK(again.selected.empty());
    CHECK(again.facts_created.empty());
  }
  SUBCASE("conflict is flagged when a contradicting statement arrives") {
    const auto s =
        e.ingest_turn(fixtures::turn("s30", "I just started a job at Quenvar.", "2023-09-01"));
    CHECK(s.conflict);
  }
}

TEST_CASE("probes grade the engine's recall") {
  Engine e;
  feed(e, fixtures::career_story());
  e.ingest_turn(fixtures::turn("s20", "My name is Zephyrine.", "2023-07-01"));
  e.run_cycle();

  std::vector<metrics::Probe> probes = {
      {"temporal", "when did i leave google", "2023-06"},
      {"temporal", "google : started ~ techstartup inc : offer", "before"},
      {"identity", "tell me what you recall regarding Zephyrine", "zephyrine"},
  };
  const auto report = e.evaluate_probes(probes);
  REQUIRE(report.results.size() == 3);
  CHECK(report.results[0].correct);
  CHECK(report.results[1].answer == "before");
  CHECK(report.results[1].correct);
  CHECK(report.results[2].correct);
  CHECK(report.temporal_coherence == 1.0);
  CHECK(report.identity_preservation == 1.0);
  CHECK(report.semantic_consistency == 1.0);
  CHECK(std::abs(report.soulfulness - 1.0) < 1e-12);

  SUBCASE("a wrong expectation scores zero for its dimension") {
    const auto r2 = e.evaluate_probes({{"temporal", "when did i leave google", "1999-01"},
                                       {"identity", "tell me about Zephyrine", "zephyrine"}});
    CHECK(r2.temporal_coherence == 0.0);
    CHECK(r2.results[0].answer.substr(0, 7) == "2023-06");
  }
  SUBCASE("probe sets need both kinds") {
    CHECK(code_of([&] { e.evaluate_probes({}); }) == ErrorCode::EmptyProbeSet);
    CHECK(code_of([&] {
            e.evaluate_probes({{"temporal", "when did i leave google", "2023-06"}});
          }) == ErrorCode::EmptyProbeSet);
  }
}

TEST_CASE("recall bookkeeping flows through the engine") {
  Engine e;
  const auto s = e.ingest_turn(fixtures::turn("s1", "the glass harbor shimmered", "2024-01-01"));
  const auto once = e.record_access(s.trace);
  CHECK(once.access_count == 1);
  const auto patched = e.reconsolidate(s.trace, std::string("the glass harbor, revisited"));
  CHECK(patched.access_count == 2);
  CHECK(patched.content == "the glass harbor, revisited");

  AddressKeys keys;
  keys.text_terms = "harbor revisited";
  const auto hits = e.address(keys);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].id == s.trace);
}

TEST_CASE("configuration is readable and writable by key") {
  Engine e;
  CHECK(e.config_get("rrf_k") == "60.0");
  CHECK(e.config_get("cap_hippocampus") == "20000");
  CHECK(e.config_get("frozen") == "false");
  e.config_set("rrf_k", "45.5");
  CHECK(e.config_get("rrf_k") == "45.5");
  CHECK(code_of([&] { e.config_get("nonsense_knob"); }) == ErrorCode::BadArgument);
  CHECK(code_of([&] { e.config_set("rrf_k", "abc"); }) == ErrorCode::BadArgument);
  const auto j = e.config_json();
  CHECK(j["rrf_k"] == 45.5);
  CHECK(j["embed_dim"] == 64);
}

TEST_CASE("an archive round-trip preserves the whole engine state") {
  testutil::TempDir dir;
  Engine e;
  feed(e, fixtures::career_story());
  feed(e, fixtures::workflow_story());
  e.run_cycle();

  const auto summary = e.save(dir.file("engine.bma"));
  CHECK(summary.digest == e.state_digest());
  CHECK(summary.counts.at("episodic") == e.store().episodic().size());

  const auto loaded = Engine::load(dir.file("engine.bma"));
  CHECK(loaded->state_digest() == e.state_digest());
  CHECK(loaded->counts() == e.counts());

  // The revived engine keeps answering.
  const auto bundle = loaded->retrieve("when did i leave google", 5);
  REQUIRE(!bundle.temporal_answers.empty());
  CHECK(bundle.temporal_answers.front().at.month == 6);
}
