#pragma once

// Shared text plumbing: tokenization, word splitting with case preserved,
// small vector helpers. Tokens are lowercase alphanumeric runs; apostrophes
// split ("I've" -> "i", "ve"), which is fine for bag-of-words scoring.

#include <string>
#include <vector>

namespace bmam {

std::vector<std::string> tokenize(const std::string& text);

std::string to_lower(std::string s);

// Whitespace-separated chunks with original case and punctuation.
std::vector<std::string> split_chunks(const std::string& text);

// Strips leading/trailing non-alphanumerics; "Inc." -> "Inc".
std::string strip_punct(const std::string& word);

// True when the chunk's trailing punctuation closes a sentence (. ! ?).
bool ends_sentence(const std::string& chunk);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

uint64_t fnv1a64(const std::string& s);

}  // namespace bmam
