#include "types.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "errors.hpp"

namespace bmam {

const char* temporal_relation_name(TemporalRelation r) {
  switch (r) {
    case TemporalRelation::Before: return "before";
    case TemporalRelation::After: return "after";
    case TemporalRelation::Concurrent: return "concurrent";
    case TemporalRelation::Unknown: return "unknown";
  }
  return "unknown";
}

int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m > 2 ? m - 3 : m + 9) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t yy = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365u * yoe + yoe / 4u - yoe / 100u);
  const unsigned mp = (5u * doy + 2u) / 153u;
  d = static_cast<int>(doy - (153u * mp + 2u) / 5u + 1u);
  m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  y = static_cast<int>(yy + (m <= 2));
}

int days_in_month(int y, int m) {
  static constexpr std::array<int, 12> k = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return k[static_cast<size_t>(m - 1)];
}

namespace {

// Anchored fixed-width integer scan; returns false unless exactly `width`
// digits were consumed.
bool scan_int(const std::string& s, size_t& pos, size_t width, int& out) {
  if (pos + width > s.size()) return false;
  int v = 0;
  for (size_t i = 0; i < width; ++i) {
    const char c = s[pos + i];
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    v = v * 10 + (c - '0');
  }
  pos += width;
  out = v;
  return true;
}

bool eat(const std::string& s, size_t& pos, char c) {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

}  // namespace

std::optional<Timestamp> Timestamp::parse(const std::string& text) {
  if (text == "unknown" || text.empty()) return Timestamp::unknown();

  Timestamp t;
  size_t pos = 0;
  if (!scan_int(text, pos, 4, t.year)) return std::nullopt;
  t.granularity = Granularity::Year;

  if (eat(text, pos, '-')) {
    if (!scan_int(text, pos, 2, t.month) || t.month < 1 || t.month > 12) return std::nullopt;
    t.granularity = Granularity::Month;
    if (eat(text, pos, '-')) {
      if (!scan_int(text, pos, 2, t.day) || t.day < 1 || t.day > days_in_month(t.year, t.month))
        return std::nullopt;
      t.granularity = Granularity::Day;
    }
  }

  int seconds = 0;
  if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
    if (t.granularity != Granularity::Day) return std::nullopt;
    ++pos;
    if (!scan_int(text, pos, 2, t.hour) || t.hour > 23) return std::nullopt;
    t.granularity = Granularity::Hour;
    if (eat(text, pos, ':')) {
      if (!scan_int(text, pos, 2, t.minute) || t.minute > 59) return std::nullopt;
      t.granularity = Granularity::Minute;
      if (eat(text, pos, ':')) {
        if (!scan_int(text, pos, 2, seconds) || seconds > 59) return std::nullopt;
        // Seconds are accepted and truncated; minute is the finest kept.
      }
    }
    // Zone designator: Z or +-HH:MM, only meaningful once a time exists.
    if (pos < text.size()) {
      int offset_min = 0;
      if (text[pos] == 'Z') {
        ++pos;
      } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '+' ? 1 : -1;
        ++pos;
        int oh = 0, om = 0;
        if (!scan_int(text, pos, 2, oh)) return std::nullopt;
        if (!eat(text, pos, ':')) return std::nullopt;
        if (!scan_int(text, pos, 2, om) || oh > 14 || om > 59) return std::nullopt;
        offset_min = sign * (oh * 60 + om);
      } else {
        return std::nullopt;
      }
      if (offset_min != 0) {
        int64_t total = days_from_civil(t.year, t.month, t.day) * 1440 + t.hour * 60 + t.minute -
                        offset_min;
        int64_t days = total >= 0 ? total / 1440 : (total - 1439) / 1440;
        int rem = static_cast<int>(total - days * 1440);
        civil_from_days(days, t.year, t.month, t.day);
        t.hour = rem / 60;
        t.minute = rem % 60;
        if (t.granularity == Granularity::Hour && offset_min % 60 != 0)
          t.granularity = Granularity::Minute;
      }
    }
  }

  if (pos != text.size()) return std::nullopt;
  return t;
}

std::string Timestamp::to_string() const {
  char buf[24];
  switch (granularity) {
    case Granularity::Unknown:
      return "unknown";
    case Granularity::Year:
      std::snprintf(buf, sizeof buf, "%04d", year);
      break;
    case Granularity::Month:
      std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
      break;
    case Granularity::Day:
      std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
      break;
    case Granularity::Hour:
      std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d", year, month, day, hour);
      break;
    case Granularity::Minute:
      std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d", year, month, day, hour, minute);
      break;
  }
  return buf;
}

int64_t Timestamp::midpoint_days() const {
  switch (granularity) {
    case Granularity::Unknown:
      fail(ErrorCode::BadArgument, "midpoint of unknown timestamp");
    case Granularity::Year:
      return days_from_civil(year, 7, 1);
    case Granularity::Month:
      return days_from_civil(year, month, 15);
    default:
      return days_from_civil(year, month, day);
  }
}

std::tuple<int, int, int, int, int, int, int> Timestamp::sort_key() const {
  const int unknown_last = is_known() ? 0 : 1;
  return {unknown_last, year, month, day, hour, minute, static_cast<int>(granularity)};
}

TemporalRelation compare(const Timestamp& a, const Timestamp& b) {
  if (!a.is_known() || !b.is_known()) return TemporalRelation::Unknown;
  const auto g = std::min(a.granularity, b.granularity);
  const auto cmp = [](int x, int y) { return x < y ? -1 : (x > y ? 1 : 0); };
  int c = cmp(a.year, b.year);
  if (c == 0 && g >= Granularity::Month) c = cmp(a.month, b.month);
  if (c == 0 && g >= Granularity::Day) c = cmp(a.day, b.day);
  if (c == 0 && g >= Granularity::Hour) c = cmp(a.hour, b.hour);
  if (c == 0 && g >= Granularity::Minute) c = cmp(a.minute, b.minute);
  if (c < 0) return TemporalRelation::Before;
  if (c > 0) return TemporalRelation::After;
  return TemporalRelation::Concurrent;
}

const char* record_kind_prefix(RecordKind k) {
  switch (k) {
    case RecordKind::Episodic: return "epi";
    case RecordKind::Semantic: return "sem";
    case RecordKind::Timeline: return "tln";
    case RecordKind::Salience: return "sal";
    case RecordKind::Procedural: return "prc";
  }
  return "unk";
}

std::string MemoryId::to_string() const {
  return std::string(record_kind_prefix(kind)) + ":" + std::to_string(seq);
}

std::optional<MemoryId> MemoryId::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const std::string prefix = text.substr(0, colon);
  MemoryId id;
  if (prefix == "epi") id.kind = RecordKind::Episodic;
  else if (prefix == "sem") id.kind = RecordKind::Semantic;
  else if (prefix == "tln") id.kind = RecordKind::Timeline;
  else if (prefix == "sal") id.kind = RecordKind::Salience;
  else if (prefix == "prc") id.kind = RecordKind::Procedural;
  else return std::nullopt;
  const char* first = text.data() + colon + 1;
  const char* last = text.data() + text.size();
  if (first == last) return std::nullopt;
  const auto [p, ec] = std::from_chars(first, last, id.seq);
  if (ec != std::errc{} || p != last) return std::nullopt;
  return id;
}

}  // namespace bmam
