#include "bm25.hpp"

#include <algorithm>
#include <cmath>

#include "text.hpp"

namespace bmam {

Bm25Index::Bm25Index(std::vector<Bm25Doc> docs, double k1, double b)
    : docs_(std::move(docs)), k1_(k1), b_(b) {
  doc_len_.reserve(docs_.size());
  long long total = 0;
  for (size_t d = 0; d < docs_.size(); ++d) {
    std::unordered_map<std::string, int> tf;
    for (const auto& t : docs_[d].tokens) ++tf[t];
    for (const auto& [term, count] : tf) postings_[term].push_back({d, count});
    doc_len_.push_back(static_cast<int>(docs_[d].tokens.size()));
    total += doc_len_.back();
  }
  avg_len_ = docs_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(docs_.size());
  // Postings sorted by doc index for deterministic iteration.
  for (auto& [term, plist] : postings_)
    std::sort(plist.begin(), plist.end(),
              [](const Posting& a, const Posting& b2) { return a.doc < b2.doc; });
}

std::vector<std::pair<MemoryId, double>> Bm25Index::query(const std::string& text,
                                                          size_t k_top) const {
  // Unique query terms in first-appearance order; accumulation order per doc
  // therefore matches a doc-major loop over the same term sequence.
  std::vector<std::string> terms;
  for (const auto& t : tokenize(text))
    if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);

  const double n = static_cast<double>(docs_.size());
  std::unordered_map<size_t, double> acc;
  std::vector<size_t> touched;
  for (const auto& term : terms) {
    const auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double df = static_cast<double>(it->second.size());
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    for (const auto& p : it->second) {
      const double tf = static_cast<double>(p.tf);
      const double dl = static_cast<double>(doc_len_[p.doc]);
      const double sat = tf * (k1_ + 1.0) / (tf + k1_ * (1.0 - b_ + b_ * dl / avg_len_));
      const auto [slot, fresh] = acc.try_emplace(p.doc, 0.0);
      if (fresh) touched.push_back(p.doc);
      slot->second += idf * sat;
    }
  }

  std::sort(touched.begin(), touched.end(), [&](size_t a, size_t b2) {
    const double sa = acc.at(a), sb = acc.at(b2);
    if (sa != sb) return sa > sb;
    return docs_[a].id < docs_[b2].id;
  });
  if (touched.size() > k_top) touched.resize(k_top);

  std::vector<std::pair<MemoryId, double>> out;
  out.reserve(touched.size());
  for (const size_t d : touched) out.emplace_back(docs_[d].id, acc.at(d));
  return out;
}

}  // namespace bmam
