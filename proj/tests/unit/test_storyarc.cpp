#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "bmam/storyarc.hpp"
#include "bmam/substrate.hpp"
#include "bmam/types.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bmam;

namespace {

Timestamp ts(const std::string& s) {
  auto t = Timestamp::parse(s);
  REQUIRE(t.has_value());
  return *t;
}

MemoryId add_trace(MemoryStore& store, const std::string& content,
                   const std::vector<std::string>& entities, const Timestamp& event_time) {
  EpisodicTrace t;
  t.content = content;
  t.entities = entities;
  t.event_time = event_time;
  t.ingest_time = ts("2024-01-01T00:00");
  t.salience = 0.5;
  const MemoryId id = store.put(t);
  t.id = id;
  storyarc::index_event(store, t);
  return id;
}

std::vector<TimelineEvent> events_of(const MemoryStore& store, const std::string& entity) {
  std::vector<TimelineEvent> out;
  for (const auto& e : store.timeline())
    if (e.entity == entity) out.push_back(e);
  return out;
}

const TimelineEvent& at_seq(const std::vector<TimelineEvent>& evs, int seq) {
  for (const auto& e : evs)
    if (e.seq == seq) return e;
  REQUIRE(false);
  return evs.front();
}

}  // namespace

TEST_CASE("index_event creates one normalized event per entity") {
  MemoryStore store;
  EpisodicTrace t;
  t.content = "accepted the offer";
  t.entities = {"TechStartup Inc.", "Google", "google"};  // dup after normalization
  t.event_time = ts("2023-06-20");
  t.ingest_time = ts("2023-06-20T11:00");
  t.id = store.put(t);

  const auto created = storyarc::index_event(store, t);
  REQUIRE(created.size() == 2);
  REQUIRE(store.timeline().size() == 2);
  CHECK(store.timeline()[0].entity == "techstartup inc");
  CHECK(store.timeline()[1].entity == "google");
  for (const auto& e : store.timeline()) {
    CHECK(e.trace_ref == t.id);
    CHECK(e.at == t.event_time);
    CHECK(e.description == t.content);
    CHECK(e.seq == 1);
  }

  // Re-indexing the same trace is a no-op.
  CHECK(storyarc::index_event(store, t).empty());
  CHECK(store.timeline().size() == 2);
}

TEST_CASE("index_event renumbers an entity timeline by timestamp") {
  MemoryStore store;
  add_trace(store, "third event", {"alpha"}, ts("2023-05"));
  add_trace(store, "first event", {"alpha"}, ts("2023-01"));
  add_trace(store, "undated event", {"alpha"}, Timestamp{});
  add_trace(store, "second event", {"alpha"}, ts("2023-03"));

  const auto evs = events_of(store, "alpha");
  REQUIRE(evs.size() == 4);
  CHECK(at_seq(evs, 1).description == "first event");
  CHECK(at_seq(evs, 2).description == "second event");
  CHECK(at_seq(evs, 3).description == "third event");
  CHECK(at_seq(evs, 4).description == "undated event");  // unknown sorts last

  SUBCASE("equal timestamps keep arrival order") {
    add_trace(store, "second event bis", {"alpha"}, ts("2023-03"));
    const auto evs2 = events_of(store, "alpha");
    REQUIRE(evs2.size() == 5);
    CHECK(at_seq(evs2, 2).description == "second event");
    CHECK(at_seq(evs2, 3).description == "second event bis");
    CHECK(at_seq(evs2, 4).description == "third event");
  }

  SUBCASE("untouched entities are not renumbered") {
    add_trace(store, "solo", {"beta"}, ts("2022-01"));
    const auto alpha = events_of(store, "alpha");
    CHECK(at_seq(alpha, 1).description == "first event");
    CHECK(events_of(store, "beta")[0].seq == 1);
  }
}

TEST_CASE("when/order/duration/extremum hand cases") {
  MemoryStore store;
  add_trace(store, "started the new job at google", {"google"}, ts("2023-01-05"));
  add_trace(store, "thinking of leaving google for a startup", {"google"}, ts("2023-03-10"));
  add_trace(store, "accepted the offer from techstartup inc", {"TechStartup Inc."},
            ts("2023-06-20"));
  add_trace(store, "undated google note about the job", {"google"}, Timestamp{});

  SUBCASE("when picks the best-overlap event") {
    const auto r = storyarc::query_when(store, "Google", "started the job");
    REQUIRE(r.has_value());
    CHECK(r->at == ts("2023-01-05"));
    CHECK(r->event.description == "started the new job at google");
  }
  SUBCASE("when: overlap outranks recency, ties go to the later event") {
    // Both events share one token; the later one must win.
    const auto tie = storyarc::query_when(store, "google", "google");
    REQUIRE(tie.has_value());
    CHECK(tie->at == ts("2023-03-10"));
    // Two overlapping tokens beat one even on an earlier event.
    const auto ov = storyarc::query_when(store, "google", "started job thinking");
    REQUIRE(ov.has_value());
    CHECK(ov->at == ts("2023-01-05"));
  }
  SUBCASE("when: empty pattern, foreign tokens, unknown timestamps") {
    CHECK_FALSE(storyarc::query_when(store, "google", "").has_value());
    CHECK_FALSE(storyarc::query_when(store, "google", "zzz qqq").has_value());
    // "undated" appears only on the unknown-timestamp event.
    CHECK_FALSE(storyarc::query_when(store, "google", "undated").has_value());
    CHECK_FALSE(storyarc::query_when(store, "nobody", "job").has_value());
  }
  SUBCASE("order compares matched events at the coarser granularity") {
    CHECK(storyarc::query_order(store, "google", "started", "techstartup inc", "offer") ==
          TemporalRelation::Before);
    CHECK(storyarc::query_order(store, "techstartup inc", "offer", "google", "started") ==
          TemporalRelation::After);
    CHECK(storyarc::query_order(store, "google", "started", "google", "job") ==
          TemporalRelation::Concurrent);
    CHECK(storyarc::query_order(store, "google", "zzz", "techstartup inc", "offer") ==
          TemporalRelation::Unknown);
  }
  SUBCASE("duration is an absolute day gap") {
    const auto d = storyarc::query_duration(store, "google", "started", "techstartup inc", "offer");
    REQUIRE(d.has_value());
    CHECK(*d == 166);  // 2023-01-05 .. 2023-06-20
    const auto rev =
        storyarc::query_duration(store, "techstartup inc", "offer", "google", "started");
    REQUIRE(rev.has_value());
    CHECK(*rev == 166);
    CHECK_FALSE(storyarc::query_duration(store, "google", "zzz", "google", "job").has_value());
  }
  SUBCASE("extremum scans known events, optionally filtered") {
    const auto first = storyarc::query_extremum(store, "google", storyarc::Extremum::First);
    REQUIRE(first.has_value());
    CHECK(first->description == "started the new job at google");
    const auto last = storyarc::query_extremum(store, "google", storyarc::Extremum::Last);
    REQUIRE(last.has_value());
    CHECK(last->description == "thinking of leaving google for a startup");
    const auto filtered =
        storyarc::query_extremum(store, "google", storyarc::Extremum::Last, "started");
    REQUIRE(filtered.has_value());
    CHECK(filtered->description == "started the new job at google");
    CHECK_FALSE(storyarc::query_extremum(store, "google", storyarc::Extremum::First, "zzz")
                    .has_value());
    CHECK_FALSE(storyarc::query_extremum(store, "nobody", storyarc::Extremum::First).has_value());
  }
}

TEST_CASE("match_events ranks transitions above plain overlap on departure queries") {
  MemoryStore store;
  const auto t1 = add_trace(store, "started the new job at google", {"google"}, ts("2023-01-05"));
  const auto t2 =
      add_trace(store, "thinking of leaving google for a startup", {"google"}, ts("2023-03-10"));
  const auto t3 = add_trace(store, "accepted the offer from techstartup inc",
                            {"TechStartup Inc."}, ts("2023-06-20"));

  SUBCASE("departure query lands on the destination timeline") {
    const auto out = storyarc::match_events(store, "when did i leave google", {"google"});
    REQUIRE(out.size() == 3);
    CHECK(out[0].trace_ref == t3);
    CHECK(out[0].entity == "techstartup inc");
    CHECK(out[0].at == ts("2023-06-20"));
    CHECK(out[0].score == 2.0);
    // Plain matches follow, later timestamp first.
    CHECK(out[1].trace_ref == t2);
    CHECK(out[1].score == 1.0);
    CHECK(out[2].trace_ref == t1);
  }
  SUBCASE("without a departure cue only plain overlap answers") {
    const auto out = storyarc::match_events(store, "the google job", {"google"});
    REQUIRE(out.size() == 2);
    CHECK(out[0].trace_ref == t1);  // three overlapping tokens beat one
    CHECK(out[0].score == 3.0);
    CHECK(out[1].trace_ref == t2);
    CHECK(out[1].score == 1.0);
  }
  SUBCASE("no entities means all timelines, no transitions") {
    const auto out = storyarc::match_events(store, "leaving the offer", {});
    REQUIRE(out.size() == 3);
    CHECK(out[0].trace_ref == t3);  // two overlapping tokens
    CHECK(out[0].score == 2.0);
    CHECK(out[1].trace_ref == t2);  // ties resolve to the later event
    CHECK(out[2].trace_ref == t1);
  }
  SUBCASE("empty query yields nothing") {
    CHECK(storyarc::match_events(store, "", {"google"}).empty());
    CHECK(storyarc::match_events(store, "...", {"google"}).empty());
  }
  SUBCASE("one answer per trace even with several matching entities") {
    MemoryStore s2;
    const auto shared =
        add_trace(s2, "quenvar met ostrelli at the launch", {"Quenvar", "Ostrelli"},
                  ts("2022-08-01"));
    const auto out = storyarc::match_events(s2, "the launch meeting", {});
    REQUIRE(out.size() == 1);
    CHECK(out[0].trace_ref == shared);
  }
}

TEST_CASE("timeline queries agree with a full-scan oracle on random cases") {
  std::mt19937_64 rng(20240817);
  for (int iter = 0; iter < 6; ++iter) {
    const auto synth = fixtures::make_timeline_case(rng, 120);

    // Three ingestion orders must all yield the oracle's answers.
    std::vector<size_t> order(synth.events.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (int perm = 0; perm < 3; ++perm) {
      std::shuffle(order.begin(), order.end(), rng);
      MemoryStore store;
      for (const size_t i : order) {
        const auto& e = synth.events[i];
        add_trace(store, e.description, {e.entity}, e.at);
      }

      // Patterns drawn from real descriptions plus a miss.
      std::vector<std::string> patterns;
      for (int p = 0; p < 4; ++p)
        patterns.push_back(synth.events[rng() % synth.events.size()].description);
      patterns.push_back("zzz");

      for (const auto& entity : synth.entities) {
        for (const auto& pat : patterns) {
          const auto got = storyarc::query_when(store, entity, pat);
          const auto want = oracle::scan_when(synth.events, entity, pat);
          REQUIRE(got.has_value() == want.has_value());
          if (got) {
            CHECK(got->at == want->at);
            CHECK(got->event.description == want->description);
          }
        }
        for (const bool first : {true, false}) {
          const auto got = storyarc::query_extremum(
              store, entity, first ? storyarc::Extremum::First : storyarc::Extremum::Last);
          const auto want = oracle::scan_extremum(synth.events, entity, first);
          REQUIRE(got.has_value() == want.has_value());
          if (got) {
            CHECK(got->at == want->at);
            CHECK(got->description == want->description);
          }
        }
      }
      for (size_t a = 0; a + 1 < synth.entities.size() && a < 2; ++a) {
        const auto& ea = synth.entities[a];
        const auto& eb = synth.entities[a + 1];
        const auto& pa = patterns[0];
        const auto& pb = patterns[1];
        CHECK(storyarc::query_order(store, ea, pa, eb, pb) ==
              oracle::scan_order(synth.events, ea, pa, eb, pb));
        const auto got = storyarc::query_duration(store, ea, pa, eb, pb);
        const auto want = oracle::scan_duration(synth.events, ea, pa, eb, pb);
        REQUIRE(got.has_value() == want.has_value());
        if (got) CHECK(*got == *want);
      }
    }
  }
}
