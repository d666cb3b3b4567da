#include "archive.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace bmam {

namespace {

constexpr uint32_t kLocalSig = 0x04034b50;
constexpr uint32_t kCentralSig = 0x02014b50;
constexpr uint32_t kEocdSig = 0x06054b50;
// 1980-01-01 00:00:00 in DOS date/time; keeps exports byte-identical.
constexpr uint16_t kDosTime = 0;
constexpr uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;

void put16(std::string& out, uint16_t v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>((v >> 8) & 0xff);
}

void put32(std::string& out, uint32_t v) {
  put16(out, static_cast<uint16_t>(v & 0xffff));
  put16(out, static_cast<uint16_t>((v >> 16) & 0xffff));
}

uint16_t get16(const std::string& s, size_t off) {
  return static_cast<uint16_t>(static_cast<unsigned char>(s[off]) |
                               (static_cast<unsigned char>(s[off + 1]) << 8));
}

uint32_t get32(const std::string& s, size_t off) {
  return static_cast<uint32_t>(get16(s, off)) | (static_cast<uint32_t>(get16(s, off + 2)) << 16);
}

uint32_t crc_of(const std::string& data) {
  return static_cast<uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

void need(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::ArchiveCorrupt, what);
}

}  // namespace

void write_zip(const std::string& path, const std::vector<ZipEntry>& entries) {
  std::string out;
  std::string central;
  for (const auto& e : entries) {
    const uint32_t offset = static_cast<uint32_t>(out.size());
    const uint32_t crc = crc_of(e.data);
    const uint32_t size = static_cast<uint32_t>(e.data.size());
    // local file header
    put32(out, kLocalSig);
    put16(out, 20);  // version needed
    put16(out, 0);   // flags
    put16(out, 0);   // method: store
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, static_cast<uint16_t>(e.name.size()));
    put16(out, 0);  // extra len
    out += e.name;
    out += e.data;
    // central directory record
    put32(central, kCentralSig);
    put16(central, 20);  // made by
    put16(central, 20);  // needed
    put16(central, 0);
    put16(central, 0);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, static_cast<uint16_t>(e.name.size()));
    put16(central, 0);  // extra
    put16(central, 0);  // comment
    put16(central, 0);  // disk
    put16(central, 0);  // internal attrs
    put32(central, 0);  // external attrs
    put32(central, offset);
    central += e.name;
  }
  const uint32_t cd_offset = static_cast<uint32_t>(out.size());
  out += central;
  put32(out, kEocdSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<uint16_t>(entries.size()));
  put16(out, static_cast<uint16_t>(entries.size()));
  put32(out, static_cast<uint32_t>(central.size()));
  put32(out, cd_offset);
  put16(out, 0);  // comment len

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::IoError, "cannot open for write: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) fail(ErrorCode::IoError, "write failed: " + path);
}

std::vector<ZipEntry> read_zip(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot open: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  const std::string s = buf.str();

  need(s.size() >= 22, "file too small for an archive");
  // EOCD: scan backwards (comment may pad the tail in foreign zips).
  size_t eocd = std::string::npos;
  const size_t scan_floor = s.size() > 22 + 65535 ? s.size() - 22 - 65535 : 0;
  for (size_t i = s.size() - 22; i + 1 > scan_floor; --i) {
    if (get32(s, i) == kEocdSig) {
      eocd = i;
      break;
    }
    if (i == 0) break;
  }
  need(eocd != std::string::npos, "end-of-archive record missing");
  const uint16_t count = get16(s, eocd + 10);
  const uint32_t cd_size = get32(s, eocd + 12);
  const uint32_t cd_offset = get32(s, eocd + 16);
  need(static_cast<size_t>(cd_offset) + cd_size <= s.size(), "central directory out of bounds");

  std::vector<ZipEntry> entries;
  size_t pos = cd_offset;
  for (uint16_t i = 0; i < count; ++i) {
    need(pos + 46 <= s.size() && get32(s, pos) == kCentralSig, "bad central directory entry");
    const uint16_t method = get16(s, pos + 10);
    const uint32_t crc = get32(s, pos + 16);
    const uint32_t csize = get32(s, pos + 20);
    const uint32_t usize = get32(s, pos + 24);
    const uint16_t name_len = get16(s, pos + 28);
    const uint16_t extra_len = get16(s, pos + 30);
    const uint16_t comment_len = get16(s, pos + 32);
    const uint32_t local_off = get32(s, pos + 42);
    need(pos + 46 + name_len <= s.size(), "truncated entry name");
    const std::string name = s.substr(pos + 46, name_len);
    need(method == 0 && csize == usize, "unsupported compression method");

    need(static_cast<size_t>(local_off) + 30 <= s.size() && get32(s, local_off) == kLocalSig,
         "bad local header");
    const uint16_t lname_len = get16(s, local_off + 26);
    const uint16_t lextra_len = get16(s, local_off + 28);
    const size_t data_off = static_cast<size_t>(local_off) + 30 + lname_len + lextra_len;
    need(data_off + csize <= s.size(), "truncated entry data");
    ZipEntry e;
    e.name = name;
    e.data = s.substr(data_off, csize);
    need(crc_of(e.data) == crc, "checksum mismatch");
    entries.push_back(std::move(e));
    pos += 46 + static_cast<size_t>(name_len) + extra_len + comment_len;
  }
  return entries;
}

namespace {

const char* kStoreFiles[] = {"episodic.jsonl",   "semantic.jsonl",  "timeline.jsonl",
                             "salience.jsonl",   "procedural.jsonl", "working_memory.jsonl"};

std::string records_file(const MemoryStore& store, const std::string& name) {
  std::string out;
  const auto lines = [&out](const auto& records) {
    for (const auto& r : records) {
      out += canonical_line(to_json(r));
      out += '\n';
    }
  };
  if (name == "episodic.jsonl") lines(store.episodic());
  else if (name == "semantic.jsonl") lines(store.semantic());
  else if (name == "timeline.jsonl") lines(store.timeline());
  else if (name == "salience.jsonl") lines(store.salience());
  else if (name == "procedural.jsonl") lines(store.procedural());
  else if (name == "working_memory.jsonl") lines(store.working_memory());
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

json manifest_json(const MemoryStore& store) {
  return {
      {"config", store.config().to_json()},
      {"counts",
       {{"episodic", store.episodic().size()},
        {"procedural", store.procedural().size()},
        {"salience", store.salience().size()},
        {"semantic", store.semantic().size()},
        {"timeline", store.timeline().size()},
        {"working_memory", store.working_memory().size()}}},
      {"format", "bma"},
      {"format_version", 1},
      {"next_ids",
       {{"epi", store.next_seq(RecordKind::Episodic)},
        {"prc", store.next_seq(RecordKind::Procedural)},
        {"sal", store.next_seq(RecordKind::Salience)},
        {"sem", store.next_seq(RecordKind::Semantic)},
        {"tln", store.next_seq(RecordKind::Timeline)}}},
      {"state_digest", store.state_digest()},
  };
}

}  // namespace

ArchiveSummary export_archive(const MemoryStore& store, const std::string& path) {
  std::vector<ZipEntry> entries;
  entries.push_back({"manifest.json", manifest_json(store).dump() + "\n"});
  for (const char* name : kStoreFiles) entries.push_back({name, records_file(store, name)});
  write_zip(path, entries);

  ArchiveSummary summary;
  summary.path = path;
  summary.digest = store.state_digest();
  summary.counts = {
      {"episodic", store.episodic().size()},       {"semantic", store.semantic().size()},
      {"timeline", store.timeline().size()},       {"salience", store.salience().size()},
      {"procedural", store.procedural().size()},   {"working_memory", store.working_memory().size()},
  };
  return summary;
}

MemoryStore import_archive(const std::string& path) {
  std::vector<ZipEntry> entries;
  try {
    entries = read_zip(path);
  } catch (const BmamError& e) {
    if (e.code() == ErrorCode::IoError) throw;
    fail(ErrorCode::ArchiveCorrupt, e.what());
  }
  need(!entries.empty(), "empty archive");
  need(entries.front().name == "manifest.json", "manifest.json must be the first entry");

  json manifest;
  try {
    manifest = json::parse(entries.front().data);
  } catch (const json::exception& e) {
    fail(ErrorCode::ArchiveCorrupt, std::string("bad manifest: ") + e.what());
  }

  try {
    const auto ver = manifest.find("format_version");
    need(ver != manifest.end() && ver->is_number_integer(), "manifest missing format_version");
    if (ver->get<int>() != 1)
      fail(ErrorCode::VersionMismatch,
           "unsupported format_version " + std::to_string(ver->get<int>()));

    EngineConfig cfg = EngineConfig::from_json(manifest.at("config"));
    const bool was_frozen = cfg.frozen;
    cfg.frozen = false;  // load with the writer enabled, restore below

    MemoryStore store(cfg);
    std::map<std::string, std::string> files;
    for (size_t i = 1; i < entries.size(); ++i) {
      need(!files.count(entries[i].name), "duplicate entry");
      files[entries[i].name] = entries[i].data;
    }
    need(files.size() == std::size(kStoreFiles), "unexpected entry set");

    const auto& counts = manifest.at("counts");
    const auto load_file = [&](const std::string& name, const char* count_key, auto parse_fn,
                               auto consume) {
      const auto it = files.find(name);
      need(it != files.end(), "missing store file");
      const auto lines = split_lines(it->second);
      const uint64_t expected = counts.at(count_key).get<uint64_t>();
      need(lines.size() == expected, "record count mismatch");
      for (const auto& line : lines) {
        json j;
        try {
          j = json::parse(line);
        } catch (const json::exception& e) {
          fail(ErrorCode::ArchiveCorrupt, std::string("bad record line: ") + e.what());
        }
        consume(parse_fn(j));
      }
    };

    load_file("episodic.jsonl", "episodic", episodic_from_json,
              [&](EpisodicTrace t) { store.load_raw(std::move(t)); });
    load_file("semantic.jsonl", "semantic", fact_from_json,
              [&](SemanticFact f) { store.load_raw(std::move(f)); });
    load_file("timeline.jsonl", "timeline", timeline_event_from_json,
              [&](TimelineEvent e) { store.load_raw(std::move(e)); });
    load_file("salience.jsonl", "salience", salience_from_json,
              [&](SalienceRecord s) { store.load_raw(std::move(s)); });
    load_file("procedural.jsonl", "procedural", pattern_from_json,
              [&](ProceduralPattern p) { store.load_raw(std::move(p)); });
    std::vector<WmItem> wm;
    load_file("working_memory.jsonl", "working_memory", wm_item_from_json,
              [&](WmItem w) { wm.push_back(std::move(w)); });
    store.replace_working_memory(std::move(wm));

    const auto ids = manifest.find("next_ids");
    if (ids != manifest.end()) {
      store.set_next_seq(RecordKind::Episodic, ids->at("epi").get<uint64_t>());
      store.set_next_seq(RecordKind::Semantic, ids->at("sem").get<uint64_t>());
      store.set_next_seq(RecordKind::Timeline, ids->at("tln").get<uint64_t>());
      store.set_next_seq(RecordKind::Salience, ids->at("sal").get<uint64_t>());
      store.set_next_seq(RecordKind::Procedural, ids->at("prc").get<uint64_t>());
    }

    store.set_frozen(was_frozen);
    const std::string recorded = manifest.at("state_digest").get<std::string>();
    need(store.state_digest() == recorded, "state digest mismatch");
    return store;
  } catch (const BmamError& e) {
    if (e.code() == ErrorCode::VersionMismatch || e.code() == ErrorCode::ArchiveCorrupt) throw;
    fail(ErrorCode::ArchiveCorrupt, e.what());
  } catch (const json::exception& e) {
    fail(ErrorCode::ArchiveCorrupt, e.what());
  }
}

}  // namespace bmam
