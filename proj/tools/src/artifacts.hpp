#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace jtfu::cli {

using ordered_json = nlohmann::ordered_json;
using Params = std::map<std::string, std::string>;  // sorted keys: canonical order

// Resolved identity of one run (or one cacheable sub-step): what goes into
// the config hash and the manifest.
struct RunMeta {
  std::string command;
  Params params;
  std::uint64_t seed = 0;
  int threads = 1;
};

// FNV-1a over "command|k=v|...|version=..."; stable across runs and platforms.
std::uint64_t config_hash(const RunMeta& meta);
std::string hash_hex(std::uint64_t value, int digits);

// Output directory plus JSON-detail cache. File writes register the path so
// the manifest can list every artifact of the run; cache entries carry their
// full meta and are revalidated on load (hash collisions degrade to misses).
class ArtifactStore {
 public:
  ArtifactStore(std::filesystem::path output_dir, std::filesystem::path cache_dir,
                bool refresh);

  std::filesystem::path output_path(const std::string& name) const;
  void write_text(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const ordered_json& doc);

  std::optional<ordered_json> cache_load(const RunMeta& meta);
  void cache_store(const RunMeta& meta, const ordered_json& payload);

  // <command>-<hash8>.manifest.json with the resolved config, artifact
  // version, timestamps, output list, and cache counters.
  void write_manifest(const RunMeta& meta);

  int cache_hits() const { return hits_; }
  int cache_misses() const { return misses_; }

 private:
  std::filesystem::path out_;
  std::filesystem::path cache_;
  bool refresh_;
  std::vector<std::string> outputs_;
  int hits_ = 0;
  int misses_ = 0;
  std::string started_at_;
};

std::string iso_utc_now();

} // namespace jtfu::cli
