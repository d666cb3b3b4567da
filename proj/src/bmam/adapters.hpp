#pragma once

// Model adapters: embedding, extraction, query classification. Each is an
// interface with a deterministic offline implementation; every core path and
// every test runs on the offline set. Online substitutes may be plugged in
// behind the same contracts but are never required.

#include <memory>
#include <string>
#include <vector>

#include "records.hpp"
#include "types.hpp"

namespace bmam {

struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;
  double confidence = 0.0;
};

struct PreferenceStatement {
  std::string domain;     // e.g. "code"
  std::string attribute;  // e.g. "language"
  std::string value;      // canonical value, e.g. "typescript"
  std::string statement;  // original sentence
};

struct ExtractionResult {
  std::vector<std::string> entities;  // normalized, deduplicated, in first-seen order
  std::vector<TemporalExpression> temporal_expressions;
  std::vector<Triple> triples;
  std::vector<PreferenceStatement> preferences;
  bool identity_flag = false;
};

struct QueryProfile {
  double temporal = 0.0;
  double identity = 0.0;
  double preference = 0.0;
  double factual = 0.0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  // Unit-norm vector of the configured dimension; EmptyText if no tokens.
  virtual std::vector<double> embed(const std::string& text) const = 0;
  virtual int dim() const = 0;
};

// Offline embedder: each token hashes (FNV-1a 64) to a bucket, contributing
// +-count by the hash's top bit; the bucket vector is L2-normalized. Token
// order never matters, identical texts always agree.
class HashedEmbedder : public Embedder {
 public:
  explicit HashedEmbedder(int dim);
  std::vector<double> embed(const std::string& text) const override;
  int dim() const override { return dim_; }

 private:
  int dim_;
};

class Extractor {
 public:
  virtual ~Extractor() = default;
  virtual ExtractionResult extract(const std::string& text, const std::string& speaker,
                                   const Timestamp& turn_time) const = 0;
};

// Offline rule-based extractor. Entities: capitalized spans (sentence-initial
// words only when they carry internal uppercase or sit in the seed
// dictionary), adjacent spans merged. Temporal expressions: ISO dates,
// month-name dates, bare years, today/yesterday/tomorrow against the turn
// timestamp. Triples and preferences come from a small template set covering
// the documented fixture vocabulary; first-person templates are skipped for
// assistant turns.
class RuleExtractor : public Extractor {
 public:
  ExtractionResult extract(const std::string& text, const std::string& speaker,
                           const Timestamp& turn_time) const override;
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual QueryProfile classify(const std::string& query) const = 0;
};

// Offline classifier: per-dimension keyword/phrase tables, score = strongest
// matching cue, clamped to [0,1]. Factual carries a 0.5 floor — any query is
// at least half a lookup.
class KeywordClassifier : public Classifier {
 public:
  QueryProfile classify(const std::string& query) const override;
};

struct AdapterSet {
  std::shared_ptr<const Embedder> embedder;
  std::shared_ptr<const Extractor> extractor;
  std::shared_ptr<const Classifier> classifier;

  static AdapterSet offline(int embed_dim);
};

}  // namespace bmam
