#pragma once

// .bma archives: a zip-compatible container (store method only, fixed DOS
// timestamps, CRC-32 checked) holding manifest.json FIRST plus one canonical
// line-delimited record file per store. Byte-deterministic: exporting the
// same state twice yields identical files.

#include <map>
#include <string>
#include <vector>

#include "substrate.hpp"

namespace bmam {

struct ArchiveSummary {
  std::string path;
  std::map<std::string, uint64_t> counts;
  std::string digest;
};

ArchiveSummary export_archive(const MemoryStore& store, const std::string& path);

// Throws ArchiveCorrupt (structure, CRC, counts, digest) or VersionMismatch.
MemoryStore import_archive(const std::string& path);

// Zip plumbing, exposed so tests can build corrupted fixtures.
struct ZipEntry {
  std::string name;
  std::string data;
};
void write_zip(const std::string& path, const std::vector<ZipEntry>& entries);
std::vector<ZipEntry> read_zip(const std::string& path);

}  // namespace bmam
