#include "adapters.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "errors.hpp"
#include "text.hpp"

namespace bmam {

// ---------------------------------------------------------------------------
// Embedding

HashedEmbedder::HashedEmbedder(int dim) : dim_(dim) {
  if (dim <= 0) fail(ErrorCode::BadArgument, "embed_dim must be positive");
}

std::vector<double> HashedEmbedder::embed(const std::string& text) const {
  const auto tokens = tokenize(text);
  if (tokens.empty()) fail(ErrorCode::EmptyText, "embed: text has no tokens");
  std::vector<double> v(static_cast<size_t>(dim_), 0.0);
  for (const auto& t : tokens) {
    const uint64_t h = fnv1a64(t);
    const size_t bucket = static_cast<size_t>(h % static_cast<uint64_t>(dim_));
    v[bucket] += (h >> 63) ? -1.0 : 1.0;
  }
  double norm = 0.0;
  for (const double x : v) norm += x * x;
  if (norm == 0.0) {
    // Degenerate cancellation; pin a deterministic unit vector instead.
    v[static_cast<size_t>(fnv1a64(tokens.front()) % static_cast<uint64_t>(dim_))] = 1.0;
    return v;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

std::string join(const std::vector<std::string>& toks) {
  std::string out;
  for (size_t i = 0; i < toks.size(); ++i) {
    if (i) out += ' ';
    out += toks[i];
  }
  return out;
}

// " tok tok tok " form so phrase search respects token boundaries.
std::string padded(const std::vector<std::string>& toks) { return " " + join(toks) + " "; }

bool has_phrase(const std::string& padded_tokens, const std::string& phrase) {
  return padded_tokens.find(" " + phrase + " ") != std::string::npos;
}

// Capitalized words that are never entities on their own.
const std::unordered_set<std::string>& entity_blocklist() {
  static const std::unordered_set<std::string> s = {
      "i",      "a",      "an",       "the",       "my",       "me",      "we",       "you",
      "he",     "she",    "it",       "they",      "this",     "that",    "these",    "those",
      "what",   "when",   "where",    "who",       "whom",     "why",     "how",      "always",
      "never",  "actually", "finally", "later",    "yes",      "no",      "ok",       "okay",
      "hello",  "hi",     "thanks",   "please",    "write",    "format",  "use",      "query",
      "session", "user",  "assistant", "today",    "yesterday", "tomorrow", "monday", "tuesday",
      "wednesday", "thursday", "friday", "saturday", "sunday",  "if",      "so",       "but",
      "and",    "or",     "after",    "before",    "then",     "now",     "also",     "well",
  };
  return s;
}

// Lowercase tech words recognized as entities even without capitalization.
const std::unordered_set<std::string>& seed_entities() {
  static const std::unordered_set<std::string> s = {
      "google", "typescript", "javascript", "react", "prettier",
  };
  return s;
}

int month_from_name(const std::string& lower) {
  static const std::unordered_map<std::string, int> m = {
      {"january", 1},   {"jan", 1},   {"february", 2},  {"feb", 2},   {"march", 3},
      {"mar", 3},       {"april", 4}, {"apr", 4},       {"may", 5},   {"june", 6},
      {"jun", 6},       {"july", 7},  {"jul", 7},       {"august", 8}, {"aug", 8},
      {"september", 9}, {"sep", 9},   {"sept", 9},      {"october", 10}, {"oct", 10},
      {"november", 11}, {"nov", 11},  {"december", 12}, {"dec", 12},
  };
  const auto it = m.find(lower);
  return it == m.end() ? 0 : it->second;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool has_internal_upper(const std::string& core) {
  for (size_t i = 1; i < core.size(); ++i)
    if (std::isupper(static_cast<unsigned char>(core[i]))) return true;
  return false;
}

int to_int(const std::string& s) {
  int v = 0;
  for (const char c : s) v = v * 10 + (c - '0');
  return v;
}

// Entity normalization: lowercase, drop a trailing possessive 's.
std::string normalize_entity_word(const std::string& core) {
  std::string w = to_lower(core);
  if (w.size() > 2 && w.compare(w.size() - 2, 2, "'s") == 0) w.resize(w.size() - 2);
  return w;
}

// ISO-looking token: digits first, then only date/time characters.
bool iso_candidate(const std::string& core) {
  if (core.size() < 4 || !std::isdigit(static_cast<unsigned char>(core[0]))) return false;
  return std::all_of(core.begin(), core.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == ':' || c == 'T' ||
           c == 'Z' || c == '+';
  });
}

struct AttrLexicon {
  std::unordered_map<std::string, std::string> token_attr;

  AttrLexicon() {
    for (const char* t : {"typescript", "javascript", "python", "java", "rust", "go", "golang"})
      token_attr[t] = "language";
    for (const char* t : {"prettier", "eslint", "black"}) token_attr[t] = "formatting";
    for (const char* t : {"component", "components"}) token_attr[t] = "components";
    for (const char* t : {"indent", "indentation", "tabs", "spaces"}) token_attr[t] = "indentation";
    for (const char* t : {"react", "vue", "angular"}) token_attr[t] = "framework";
    for (const char* t : {"vim", "emacs", "vscode"}) token_attr[t] = "editor";
  }

  // First attribute hit across the tokens; empty if none.
  std::string attribute_of(const std::vector<std::string>& toks) const {
    for (const auto& t : toks) {
      const auto it = token_attr.find(t);
      if (it != token_attr.end()) return it->second;
    }
    return {};
  }
};

const AttrLexicon& attr_lexicon() {
  static const AttrLexicon lex;
  return lex;
}

const std::unordered_set<std::string>& diet_lexicon() {
  static const std::unordered_set<std::string> s = {
      "vegetarian", "pescatarian", "vegan", "omnivore", "carnivore", "keto", "paleo",
      "flexitarian",
  };
  return s;
}

// Capture lowercase raw text from `from` to the first sentence/clause stop.
std::string capture_until_stop(const std::string& low, size_t from, const char* stops) {
  const size_t end = low.find_first_of(stops, from);
  return low.substr(from, end == std::string::npos ? std::string::npos : end - from);
}

}  // namespace

ExtractionResult RuleExtractor::extract(const std::string& text, const std::string& speaker,
                                        const Timestamp& turn_time) const {
  ExtractionResult out;
  const auto chunks = split_chunks(text);
  std::vector<std::string> cores;
  cores.reserve(chunks.size());
  for (const auto& c : chunks) cores.push_back(strip_punct(c));

  // --- entities: capitalized spans, merged while adjacent ----------------
  std::vector<bool> is_candidate(chunks.size(), false);
  bool sentence_initial = true;
  for (size_t i = 0; i < chunks.size(); ++i) {
    const std::string& core = cores[i];
    if (!core.empty()) {
      const std::string low = to_lower(core);
      const bool seeded = seed_entities().count(low) > 0;
      bool cand = false;
      if (seeded) {
        cand = true;
      } else if (std::isupper(static_cast<unsigned char>(core[0])) && !all_digits(core) &&
                 entity_blocklist().count(low) == 0 && month_from_name(low) == 0) {
        cand = !sentence_initial || has_internal_upper(core);
      }
      is_candidate[i] = cand;
    }
    sentence_initial = ends_sentence(chunks[i]);
  }
  std::unordered_set<std::string> seen_entities;
  for (size_t i = 0; i < chunks.size();) {
    if (!is_candidate[i]) {
      ++i;
      continue;
    }
    std::vector<std::string> span;
    size_t j = i;
    while (j < chunks.size() && is_candidate[j]) {
      span.push_back(normalize_entity_word(cores[j]));
      if (ends_sentence(chunks[j])) {
        ++j;
        break;
      }
      ++j;
    }
    const std::string entity = join(span);
    if (!entity.empty() && seen_entities.insert(entity).second) out.entities.push_back(entity);
    i = j;
  }

  // --- temporal expressions ----------------------------------------------
  const auto push_expr = [&out](std::string surface, Timestamp at) {
    out.temporal_expressions.push_back({std::move(surface), at});
  };
  for (size_t i = 0; i < cores.size();) {
    const std::string low = to_lower(cores[i]);
    const int mon = month_from_name(low);
    if (mon != 0 && i + 1 < cores.size() && all_digits(cores[i + 1])) {
      const int v1 = to_int(cores[i + 1]);
      if (cores[i + 1].size() == 4) {  // "January 2023"
        Timestamp t;
        t.year = v1;
        t.month = mon;
        t.granularity = Granularity::Month;
        push_expr(chunks[i] + " " + chunks[i + 1], t);
        i += 2;
        continue;
      }
      if (v1 >= 1 && v1 <= days_in_month(2000, mon) + 1 && i + 2 < cores.size() &&
          all_digits(cores[i + 2]) && cores[i + 2].size() == 4) {  // "June 15, 2023"
        Timestamp t;
        t.year = to_int(cores[i + 2]);
        t.month = mon;
        t.day = std::min(v1, days_in_month(t.year, mon));
        t.granularity = Granularity::Day;
        push_expr(chunks[i] + " " + chunks[i + 1] + " " + chunks[i + 2], t);
        i += 3;
        continue;
      }
    }
    if (all_digits(low) && low.size() <= 2 && i + 2 < cores.size()) {  // "15 June 2023"
      const int day = to_int(low);
      const int m2 = month_from_name(to_lower(cores[i + 1]));
      if (day >= 1 && day <= 31 && m2 != 0 && all_digits(cores[i + 2]) &&
          cores[i + 2].size() == 4) {
        Timestamp t;
        t.year = to_int(cores[i + 2]);
        t.month = m2;
        t.day = std::min(day, days_in_month(t.year, m2));
        t.granularity = Granularity::Day;
        push_expr(chunks[i] + " " + chunks[i + 1] + " " + chunks[i + 2], t);
        i += 3;
        continue;
      }
    }
    if ((low == "today" || low == "yesterday" || low == "tomorrow") &&
        turn_time.granularity >= Granularity::Day) {
      const int delta = low == "yesterday" ? -1 : (low == "tomorrow" ? 1 : 0);
      Timestamp t;
      civil_from_days(days_from_civil(turn_time.year, turn_time.month, turn_time.day) + delta,
                      t.year, t.month, t.day);
      t.granularity = Granularity::Day;
      push_expr(cores[i], t);
      ++i;
      continue;
    }
    if (iso_candidate(cores[i])) {
      // Bare 4-digit tokens count as years only inside a plausible range.
      const auto parsed = Timestamp::parse(cores[i]);
      if (parsed && parsed->is_known() && parsed->year >= 1800 && parsed->year <= 2199)
        push_expr(cores[i], *parsed);
    }
    ++i;
  }

  // --- triples & preferences ----------------------------------------------
  const auto tokens = tokenize(text);
  const std::string tok = padded(tokens);
  const std::string low_text = to_lower(text);
  const bool assistant = to_lower(speaker) == "assistant";
  const bool first_person = !assistant && has_phrase(tok, "i");

  const bool hedged = tok.find(" thinking of ") != std::string::npos ||
                      tok.find(" considering ") != std::string::npos ||
                      has_phrase(tok, "might") || has_phrase(tok, "maybe") ||
                      has_phrase(tok, "perhaps") || has_phrase(tok, "probably");
  const bool reported = has_phrase(tok, "heard") || has_phrase(tok, "apparently") ||
                        tok.find(" they said ") != std::string::npos ||
                        tok.find(" she said ") != std::string::npos ||
                        tok.find(" he said ") != std::string::npos;
  const double conf = hedged ? 0.5 : (reported ? 0.6 : 0.9);

  const auto add_triple = [&out](std::string s, std::string p, std::string o, double c) {
    for (const auto& t : out.triples)
      if (t.subject == s && t.predicate == p && t.object == o) return;
    out.triples.push_back({std::move(s), std::move(p), std::move(o), c});
  };

  if (!assistant) {
    // employer: "job at X", "work(ing) at X", "offer from X", "started at X"
    for (const auto& e : out.entities) {
      for (const char* pat : {"job at ", "work at ", "working at ", "offer from ", "started at ",
                              "joined "}) {
        if (tok.find(" " + std::string(pat) + e + " ") != std::string::npos) {
          add_triple("user", "employer", e, conf);
          break;
        }
      }
    }
    // diet: first-person plus a diet lexicon word
    if (first_person) {
      for (const auto& t : tokens) {
        if (diet_lexicon().count(t)) add_triple("user", "diet", t, conf);
      }
    }
    // name: "my name is X" / "call me X"
    for (const char* pat : {"my name is ", "call me "}) {
      const size_t pos = tok.find(" " + std::string(pat));
      if (pos != std::string::npos) {
        const size_t start = pos + 1 + std::string(pat).size();
        const size_t end = tok.find(' ', start);
        if (end != std::string::npos && end > start) {
          add_triple("user", "name", tok.substr(start, end - start), conf);
          out.identity_flag = true;
        }
      }
    }
    // thesis topic: "work on X" / "thesis on X" / "thesis about X"
    if (has_phrase(tok, "my thesis") || tok.find(" my phd ") != std::string::npos ||
        has_phrase(tok, "my dissertation")) {
      out.identity_flag = true;
      for (const char* pat : {"work on ", "thesis on ", "thesis about ", "research on "}) {
        const size_t pos = low_text.find(pat);
        if (pos != std::string::npos) {
          const auto topic = tokenize(capture_until_stop(low_text, pos + std::string(pat).size(),
                                                         ".!?,;"));
          if (!topic.empty()) {
            add_triple("user", "thesis", join(topic), conf);
            break;
          }
        }
      }
    }

    // preferences -----------------------------------------------------------
    const auto add_pref = [&](std::string attribute, std::string value) {
      if (attribute.empty() || value.empty()) return;
      std::string domain = "general";
      static const std::unordered_set<std::string> code_cues = {
          "code",   "coding",     "typescript", "javascript", "python", "react",  "component",
          "components", "format", "formatting", "prettier",   "eslint", "indent", "indentation",
      };
      for (const auto& t : tokens)
        if (code_cues.count(t)) {
          domain = "code";
          break;
        }
      for (const auto& p : out.preferences)
        if (p.attribute == attribute && p.value == value) return;
      out.preferences.push_back({domain, std::move(attribute), std::move(value), text});
    };

    // "use X" (negated occurrences skipped; "plain"/"only"/"just" skipped)
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i] != "use") continue;
      if (i > 0 && (tokens[i - 1] == "never" || tokens[i - 1] == "dont" ||
                    tokens[i - 1] == "don" || tokens[i - 1] == "not"))
        continue;
      size_t j = i + 1;
      while (j < tokens.size() &&
             (tokens[j] == "plain" || tokens[j] == "only" || tokens[j] == "just"))
        ++j;
      if (j < tokens.size()) {
        const auto attr = attr_lexicon().attribute_of({tokens[j]});
        if (!attr.empty()) add_pref(attr, tokens[j]);
      }
    }
    // "format ... with X[, ...]" up to sentence end
    {
      const size_t fpos = low_text.find("format");
      if (fpos != std::string::npos) {
        const size_t wpos = low_text.find("with ", fpos);
        if (wpos != std::string::npos) {
          const auto val = tokenize(capture_until_stop(low_text, wpos + 5, ".!?;"));
          if (!val.empty()) add_pref("formatting", join(val));
        }
      }
    }
    // "prefer X over Y" (X wins; Y recorded nowhere)
    {
      const size_t ppos = low_text.find("prefer ");
      if (ppos != std::string::npos) {
        const size_t xstart = ppos + 7;
        const size_t opos = low_text.find(" over ", xstart);
        const std::string xraw = opos != std::string::npos
                                     ? low_text.substr(xstart, opos - xstart)
                                     : capture_until_stop(low_text, xstart, ".!?,;");
        const auto xtok = tokenize(xraw);
        if (!xtok.empty()) {
          auto attr = attr_lexicon().attribute_of(xtok);
          if (attr.empty()) attr = "style";
          add_pref(attr, join(xtok));
        }
      }
    }

    // Self-referential statements — facts about the speaker and stated
    // preferences — carry the identity flag so they get protection.
    for (const auto& t : out.triples)
      if (t.subject == "user") out.identity_flag = true;
    if (!out.preferences.empty()) out.identity_flag = true;
  }

  return out;
}

// ---------------------------------------------------------------------------
// Query classification

namespace {

struct Cue {
  const char* phrase;
  double weight;
};

double best_cue(const std::string& tok, std::initializer_list<Cue> cues) {
  double best = 0.0;
  for (const auto& c : cues)
    if (has_phrase(tok, c.phrase)) best = std::max(best, c.weight);
  return std::min(1.0, best);
}

}  // namespace

QueryProfile KeywordClassifier::classify(const std::string& query) const {
  const std::string tok = padded(tokenize(query));
  QueryProfile p;
  p.temporal = best_cue(tok, {{"when", 0.9},     {"how long", 0.9}, {"before", 0.8},
                              {"after", 0.8},    {"duration", 0.8}, {"timeline", 0.8},
                              {"first", 0.7},    {"last", 0.7},     {"earliest", 0.7},
                              {"latest", 0.7},   {"ago", 0.7},      {"since", 0.6},
                              {"until", 0.6},    {"order", 0.6},    {"date", 0.6},
                              {"year", 0.5},     {"month", 0.5}});
  p.identity = best_cue(tok, {{"my name", 0.95}, {"about me", 0.9}, {"told you", 0.9},
                              {"remember me", 0.9}, {"my", 0.6},    {"did i", 0.6},
                              {"do i", 0.6},     {"am i", 0.6},     {"was i", 0.6},
                              {"mine", 0.6},     {"i", 0.5},        {"me", 0.5}});
  p.preference = best_cue(tok, {{"prefer", 0.9},     {"favorite", 0.9}, {"favourite", 0.9},
                                {"like better", 0.9}, {"rather", 0.6},  {"usually", 0.5},
                                {"style", 0.5},      {"always", 0.5},   {"never", 0.5}});
  p.factual = std::max(0.5, best_cue(tok, {{"what is", 0.9}, {"define", 0.9}, {"explain", 0.9},
                                           {"who is", 0.8},  {"how does", 0.8}, {"what was", 0.7},
                                           {"what s", 0.7},  {"what are", 0.7}, {"why", 0.6}}));
  return p;
}

AdapterSet AdapterSet::offline(int embed_dim) {
  return {std::make_shared<HashedEmbedder>(embed_dim), std::make_shared<RuleExtractor>(),
          std::make_shared<KeywordClassifier>()};
}

}  // namespace bmam
