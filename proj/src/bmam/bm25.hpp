#pragma once

// Inverted-index BM25 over episodic trace contents. Scoring uses the
// Lucene-style idf ln(1 + (N - df + 0.5)/(df + 0.5)) with k1/b saturation;
// per-document accumulation follows query term order so an independent
// doc-major oracle reproduces scores bit-for-bit.

#include <string>
#include <unordered_map>
#include <vector>

#include "types.hpp"

namespace bmam {

struct Bm25Doc {
  MemoryId id;
  std::vector<std::string> tokens;
};

class Bm25Index {
 public:
  Bm25Index(std::vector<Bm25Doc> docs, double k1, double b);

  // (doc id, score) for docs sharing at least one query term, score
  // descending, ties by id ascending; at most k_top entries.
  std::vector<std::pair<MemoryId, double>> query(const std::string& text, size_t k_top) const;

  size_t size() const { return docs_.size(); }

 private:
  struct Posting {
    size_t doc;
    int tf;
  };

  std::vector<Bm25Doc> docs_;
  std::vector<int> doc_len_;
  double avg_len_ = 0.0;
  double k1_;
  double b_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
};

}  // namespace bmam
