#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "bmam/bm25.hpp"
#include "bmam/text.hpp"
#include "oracles.hpp"

using namespace bmam;

namespace {

MemoryId eid(uint64_t seq) { return MemoryId{RecordKind::Episodic, seq}; }

std::string random_doc(std::mt19937_64& rng, const std::vector<std::string>& vocab) {
  size_t n = 1 + rng() % 12;
  std::string out;
  for (size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += vocab[rng() % vocab.size()];
  }
  return out;
}

}  // namespace

TEST_CASE("bm25 matches the doc-major brute force on random corpora") {
  const std::vector<std::string> vocab = {"red",  "green", "blue",  "round", "flat",
                                          "tall", "short", "heavy", "light", "old"};
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n_docs = 1 + rng() % 40;
    std::vector<Bm25Doc> docs;
    std::vector<std::pair<MemoryId, std::vector<std::string>>> plain;
    for (size_t d = 0; d < n_docs; ++d) {
      auto text = random_doc(rng, vocab);
      docs.push_back({eid(d), tokenize(text)});
      plain.emplace_back(eid(d), tokenize(text));
    }
    double k1 = 0.5 + (rng() % 20) * 0.1;
    double b = (rng() % 11) * 0.1;
    Bm25Index index(docs, k1, b);

    auto query = random_doc(rng, vocab);
    size_t k_top = 1 + rng() % 15;
    auto got = index.query(query, k_top);
    auto want = oracle::bm25_brute(plain, query, k1, b, k_top);

    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].first == want[i].first);
      CHECK(got[i].second == want[i].second);  // bit-exact by construction
    }
  }
}

TEST_CASE("bm25 prefers rarer terms and shorter documents") {
  std::vector<Bm25Doc> docs = {
      {eid(1), tokenize("common common common rare")},
      {eid(2), tokenize("common common")},
      {eid(3), tokenize("common unrelated filler words here")},
  };
  Bm25Index index(docs, 1.2, 0.75);

  // "rare" appears only in doc 1, so doc 1 must rank first for it.
  auto hits = index.query("rare", 10);
  REQUIRE(!hits.empty());
  CHECK(hits[0].first == eid(1));
  CHECK(hits.size() == 1);

  // For "common", the shorter document wins under length normalization.
  hits = index.query("common", 10);
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].first == eid(2));
}

TEST_CASE("bm25 edge cases") {
  Bm25Index empty({}, 1.2, 0.75);
  CHECK(empty.query("anything", 5).empty());

  std::vector<Bm25Doc> docs = {{eid(1), tokenize("alpha beta")}};
  Bm25Index index(docs, 1.2, 0.75);
  CHECK(index.query("missing terms only", 5).empty());

  // Duplicate query terms do not double count.
  auto once = index.query("alpha", 5);
  auto twice = index.query("alpha alpha alpha", 5);
  REQUIRE(once.size() == twice.size());
  CHECK(once[0].second == twice[0].second);

  // k_top truncation keeps the best.
  std::vector<Bm25Doc> many;
  for (uint64_t d = 0; d < 10; ++d)
    many.push_back({eid(d), tokenize(d == 3 ? "target target target" : "target filler")});
  Bm25Index big(many, 1.2, 0.75);
  auto top2 = big.query("target", 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0].first == eid(3));
}

TEST_CASE("bm25 ties break by id ascending") {
  std::vector<Bm25Doc> docs = {
      {eid(5), tokenize("same words")},
      {eid(2), tokenize("same words")},
      {eid(9), tokenize("same words")},
  };
  Bm25Index index(docs, 1.2, 0.75);
  auto hits = index.query("same", 10);
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].first == eid(2));
  CHECK(hits[1].first == eid(5));
  CHECK(hits[2].first == eid(9));
}
