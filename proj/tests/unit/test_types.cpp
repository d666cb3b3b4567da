#include "doctest.h"

#include <random>

#include "bmam/errors.hpp"
#include "bmam/text.hpp"
#include "bmam/types.hpp"

using namespace bmam;

TEST_CASE("timestamp parses every documented form") {
  auto t = Timestamp::parse("2023");
  REQUIRE(t);
  CHECK(t->granularity == Granularity::Year);
  CHECK(t->year == 2023);
  CHECK(t->month == 1);  // floored below the granularity
  CHECK(t->day == 1);

  t = Timestamp::parse("2023-06");
  REQUIRE(t);
  CHECK(t->granularity == Granularity::Month);
  CHECK(t->month == 6);

  t = Timestamp::parse("2023-06-15");
  REQUIRE(t);
  CHECK(t->granularity == Granularity::Day);
  CHECK(t->day == 15);

  t = Timestamp::parse("2023-06-15T10");
  REQUIRE(t);
  CHECK(t->granularity == Granularity::Hour);
  CHECK(t->hour == 10);

  t = Timestamp::parse("2023-06-15T10:30");
  REQUIRE(t);
  CHECK(t->granularity == Granularity::Minute);
  CHECK(t->minute == 30);

  // Seconds are accepted but truncated.
  t = Timestamp::parse("2023-06-15T10:30:59");
  REQUIRE(t);
  CHECK(t->granularity == Granularity::Minute);
  CHECK(t->minute == 30);

  // Space separator works like T.
  t = Timestamp::parse("2023-06-15 10:30");
  REQUIRE(t);
  CHECK(t->hour == 10);

  CHECK(Timestamp::parse("unknown")->granularity == Granularity::Unknown);
  CHECK(Timestamp::parse("")->granularity == Granularity::Unknown);
}

TEST_CASE("timestamp zone designators normalize to UTC") {
  auto t = Timestamp::parse("2023-06-15T10:30Z");
  REQUIRE(t);
  CHECK(t->hour == 10);

  t = Timestamp::parse("2023-06-15T10:30+02:00");
  REQUIRE(t);
  CHECK(t->hour == 8);
  CHECK(t->minute == 30);

  // Offset crossing midnight moves the civil date.
  t = Timestamp::parse("2023-06-15T01:00+02:00");
  REQUIRE(t);
  CHECK(t->day == 14);
  CHECK(t->hour == 23);

  t = Timestamp::parse("2023-12-31T23:30-01:00");
  REQUIRE(t);
  CHECK(t->year == 2024);
  CHECK(t->month == 1);
  CHECK(t->day == 1);
  CHECK(t->hour == 0);
  CHECK(t->minute == 30);
}

TEST_CASE("timestamp rejects malformed input") {
  CHECK_FALSE(Timestamp::parse("23"));
  CHECK_FALSE(Timestamp::parse("2023-13"));
  CHECK_FALSE(Timestamp::parse("2023-00"));
  CHECK_FALSE(Timestamp::parse("2023-02-30"));
  CHECK_FALSE(Timestamp::parse("2023-06-15T24"));
  CHECK_FALSE(Timestamp::parse("2023-06-15T10:60"));
  CHECK_FALSE(Timestamp::parse("2023-06-15T10:30junk"));
  CHECK_FALSE(Timestamp::parse("2023junk"));
  CHECK_FALSE(Timestamp::parse("2023Z"));  // zone without a time of day
  CHECK_FALSE(Timestamp::parse("not a date"));
}

TEST_CASE("timestamp to_string round trips through parse") {
  for (const char* s : {"2023", "2023-06", "2023-06-15", "2023-06-15T10", "2023-06-15T10:30",
                        "unknown"}) {
    auto t = Timestamp::parse(s);
    REQUIRE(t);
    CHECK(t->to_string() == s);
    auto back = Timestamp::parse(t->to_string());
    REQUIRE(back);
    CHECK(*back == *t);
  }
}

TEST_CASE("truncating comparison works at the coarser granularity") {
  auto month = *Timestamp::parse("2023-06");
  auto day = *Timestamp::parse("2023-06-15");
  CHECK(compare(month, day) == TemporalRelation::Concurrent);
  CHECK(compare(day, month) == TemporalRelation::Concurrent);

  CHECK(compare(*Timestamp::parse("2023-05"), day) == TemporalRelation::Before);
  CHECK(compare(*Timestamp::parse("2023-07"), day) == TemporalRelation::After);
  CHECK(compare(*Timestamp::parse("2023"), *Timestamp::parse("2024")) ==
        TemporalRelation::Before);
  CHECK(compare(*Timestamp::parse("2023-06-15T10:30"), *Timestamp::parse("2023-06-15T10:31")) ==
        TemporalRelation::Before);
  CHECK(compare(Timestamp::unknown(), day) == TemporalRelation::Unknown);
  CHECK(compare(day, Timestamp::unknown()) == TemporalRelation::Unknown);
}

TEST_CASE("midpoint convention: year -> Jul 1, month -> the 15th") {
  CHECK(Timestamp::parse("1970-01-01")->midpoint_days() == 0);
  CHECK(Timestamp::parse("2023")->midpoint_days() == days_from_civil(2023, 7, 1));
  CHECK(Timestamp::parse("2023-06")->midpoint_days() == days_from_civil(2023, 6, 15));
  CHECK(Timestamp::parse("2023-06-20T11:00")->midpoint_days() == days_from_civil(2023, 6, 20));
  CHECK_THROWS_AS(Timestamp::unknown().midpoint_days(), BmamError);
}

TEST_CASE("sort key orders civil time, coarser first on ties, unknown last") {
  auto year = *Timestamp::parse("2023");
  auto jan = *Timestamp::parse("2023-01");
  auto jan1 = *Timestamp::parse("2023-01-01");
  auto feb = *Timestamp::parse("2023-02");
  CHECK(year.sort_key() < jan.sort_key());  // same civil floor, coarser first
  CHECK(jan.sort_key() < jan1.sort_key());
  CHECK(jan1.sort_key() < feb.sort_key());
  CHECK(feb.sort_key() < Timestamp::unknown().sort_key());
}

TEST_CASE("civil calendar round trips and knows leap years") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    int y = 1800 + static_cast<int>(rng() % 400);
    int m = 1 + static_cast<int>(rng() % 12);
    int d = 1 + static_cast<int>(rng() % days_in_month(y, m));
    int yy, mm, dd;
    civil_from_days(days_from_civil(y, m, d), yy, mm, dd);
    CHECK(yy == y);
    CHECK(mm == m);
    CHECK(dd == d);
  }
  CHECK(days_in_month(2024, 2) == 29);
  CHECK(days_in_month(2023, 2) == 28);
  CHECK(days_in_month(1900, 2) == 28);  // century rule
  CHECK(days_in_month(2000, 2) == 29);  // 400-year rule
  CHECK(days_from_civil(1970, 1, 2) == 1);
  CHECK(days_from_civil(1969, 12, 31) == -1);
}

TEST_CASE("memory ids stringify and parse for every kind") {
  for (RecordKind k : {RecordKind::Episodic, RecordKind::Semantic, RecordKind::Timeline,
                       RecordKind::Salience, RecordKind::Procedural}) {
    MemoryId id{k, 17};
    auto back = MemoryId::parse(id.to_string());
    REQUIRE(back);
    CHECK(*back == id);
  }
  CHECK(MemoryId{RecordKind::Episodic, 3}.to_string() == "epi:3");
  CHECK_FALSE(MemoryId::parse("bogus:1"));
  CHECK_FALSE(MemoryId::parse("epi:"));
  CHECK_FALSE(MemoryId::parse("epi"));
  CHECK_FALSE(MemoryId::parse("epi:12junk"));
  CHECK_FALSE(MemoryId::parse("epi:-1"));
  CHECK_FALSE(MemoryId::parse(""));
}

TEST_CASE("tokenizer lowercases alphanumeric runs") {
  auto toks = tokenize("Hello, World! I've 42 things.");
  REQUIRE(toks.size() == 6);
  CHECK(toks[0] == "hello");
  CHECK(toks[1] == "world");
  CHECK(toks[2] == "i");
  CHECK(toks[3] == "ve");
  CHECK(toks[4] == "42");
  CHECK(toks[5] == "things");
  CHECK(tokenize("   ").empty());
  CHECK(tokenize("").empty());
}

TEST_CASE("chunk splitting and punctuation helpers") {
  auto chunks = split_chunks("  Went to   TechStartup Inc. today ");
  REQUIRE(chunks.size() == 5);
  CHECK(chunks[2] == "TechStartup");
  CHECK(chunks[3] == "Inc.");
  CHECK(strip_punct("Inc.") == "Inc");
  CHECK(strip_punct("(hello)!") == "hello");
  CHECK(strip_punct("...") == "");
  CHECK(ends_sentence("done."));
  CHECK(ends_sentence("done!\""));
  CHECK_FALSE(ends_sentence("done,"));
  CHECK_FALSE(ends_sentence("done"));
}

TEST_CASE("cosine similarity basics") {
  CHECK(cosine({1, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(cosine({1, 0}, {0, 1}) == doctest::Approx(0.0));
  CHECK(cosine({1, 0}, {-1, 0}) == doctest::Approx(-1.0));
  CHECK(cosine({1, 0}, {1, 0, 0}) == 0.0);  // dimension mismatch
  CHECK(cosine({}, {}) == 0.0);
  CHECK(cosine({0, 0}, {1, 0}) == 0.0);  // zero vector
}

TEST_CASE("fnv1a64 is deterministic and sensitive to input") {
  CHECK(fnv1a64("alpha") == fnv1a64("alpha"));
  CHECK(fnv1a64("alpha") != fnv1a64("beta"));
  CHECK(fnv1a64("") != fnv1a64("a"));
}
