#pragma once

// Granularity-aware timestamps and memory ids. A timestamp remembers how
// precise its source text was; comparisons truncate to the coarser side, so
// "2023-06" vs "2023-06-15" is Concurrent rather than an invented ordering.

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>

namespace bmam {

enum class Granularity : uint8_t { Unknown = 0, Year, Month, Day, Hour, Minute };

enum class TemporalRelation { Before, After, Concurrent, Unknown };

const char* temporal_relation_name(TemporalRelation r);

// Howard Hinnant's civil-calendar algorithms; exact over the proleptic
// Gregorian calendar, no time_t anywhere.
int64_t days_from_civil(int y, int m, int d);
void civil_from_days(int64_t z, int& y, int& m, int& d);
int days_in_month(int y, int m);

struct Timestamp {
  // Fields below the granularity are kept floored (month/day = 1, hour/minute
  // = 0) so equality stays structural.
  int year = 0;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  Granularity granularity = Granularity::Unknown;

  static Timestamp unknown() { return {}; }
  bool is_known() const { return granularity != Granularity::Unknown; }

  // Accepts "unknown", YYYY, YYYY-MM, YYYY-MM-DD, YYYY-MM-DDTHH[:MM[:SS]]
  // with optional trailing Z or +-HH:MM (normalized to UTC). Seconds are
  // truncated; minute is the finest granularity kept.
  static std::optional<Timestamp> parse(const std::string& text);
  std::string to_string() const;

  // Signed days since 1970-01-01 of the midpoint convention: a year maps to
  // Jul 1, a month to the 15th, finer granularities to their civil day.
  int64_t midpoint_days() const;

  // Total order for timeline storage: unknown sorts last, then floored civil
  // fields, coarser granularity first on exact civil ties.
  std::tuple<int, int, int, int, int, int, int> sort_key() const;

  bool operator==(const Timestamp&) const = default;
};

// Truncating comparison; Unknown if either side is unknown.
TemporalRelation compare(const Timestamp& a, const Timestamp& b);

enum class RecordKind : uint8_t { Episodic, Semantic, Timeline, Salience, Procedural };

const char* record_kind_prefix(RecordKind k);

struct MemoryId {
  RecordKind kind = RecordKind::Episodic;
  uint64_t seq = 0;

  std::string to_string() const;  // "epi:17", "sem:3", ...
  static std::optional<MemoryId> parse(const std::string& text);

  bool operator==(const MemoryId&) const = default;
  auto operator<=>(const MemoryId&) const = default;
};

}  // namespace bmam
