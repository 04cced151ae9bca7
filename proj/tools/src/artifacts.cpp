#include "artifacts.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "jtfu/version.hpp"

namespace jtfu::cli {

namespace {

void fnvencode(std::uint64_t& h, std::string_view text) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
}

} // namespace

std::uint64_t config_hash(const RunMeta& meta) {
  std::uint64_t h = 1469598103934665603ull;
  fnvencode(h, meta.command);
  for (const auto& [key, value] : meta.params) {
    fnvencode(h, "|");
    fnvencode(h, key);
    fnvencode(h, "=");
    fnvencode(h, value);
  }
  fnvencode(h, "|version=");
  fnvencode(h, version_string);
  return h;
}

std::string hash_hex(std::uint64_t value, int digits) {
  static const char* alphabet = "0123456789abcdef";
  std::string out(digits, '0');
  for (int i = digits - 1; i >= 0; --i) {
    out[i] = alphabet[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string iso_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ArtifactStore::ArtifactStore(std::filesystem::path output_dir,
                             std::filesystem::path cache_dir, bool refresh)
    : out_(std::move(output_dir)),
      cache_(std::move(cache_dir)),
      refresh_(refresh),
      started_at_(iso_utc_now()) {
  std::filesystem::create_directories(out_);
  std::filesystem::create_directories(cache_);
}

std::filesystem::path ArtifactStore::output_path(const std::string& name) const {
  return out_ / name;
}

void ArtifactStore::write_text(const std::string& name, const std::string& content) {
  const auto path = output_path(name);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write output file: " + path.string());
  file << content;
  outputs_.push_back(name);
}

void ArtifactStore::write_json(const std::string& name, const ordered_json& doc) {
  write_text(name, doc.dump(2) + "\n");
}

std::optional<ordered_json> ArtifactStore::cache_load(const RunMeta& meta) {
  if (refresh_) {
    ++misses_;
    return std::nullopt;
  }
  const auto path = cache_ / (hash_hex(config_hash(meta), 16) + ".json");
  std::ifstream file(path);
  if (!file) {
    ++misses_;
    return std::nullopt;
  }
  ordered_json entry = ordered_json::parse(file, nullptr, false);
  if (entry.is_discarded() || entry.value("command", "") != meta.command ||
      entry.value("version", "") != version_string || !entry.contains("payload")) {
    ++misses_;
    return std::nullopt;
  }
  // full parameter comparison: a hash collision must read as a miss
  ordered_json params = ordered_json::object();
  for (const auto& [key, value] : meta.params) params[key] = value;
  if (entry.value("parameters", ordered_json::object()) != params) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return entry["payload"];
}

void ArtifactStore::cache_store(const RunMeta& meta, const ordered_json& payload) {
  ordered_json entry;
  entry["command"] = meta.command;
  entry["version"] = version_string;
  ordered_json params = ordered_json::object();
  for (const auto& [key, value] : meta.params) params[key] = value;
  entry["parameters"] = params;
  entry["payload"] = payload;
  const auto path = cache_ / (hash_hex(config_hash(meta), 16) + ".json");
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write cache entry: " + path.string());
  file << entry.dump(2) << "\n";
}

void ArtifactStore::write_manifest(const RunMeta& meta) {
  ordered_json doc;
  doc["command"] = meta.command;
  doc["version"] = version_string;
  doc["config_hash"] = hash_hex(config_hash(meta), 16);
  ordered_json params = ordered_json::object();
  for (const auto& [key, value] : meta.params) params[key] = value;
  doc["parameters"] = params;
  doc["seed"] = meta.seed;
  doc["threads"] = meta.threads;
  doc["output_dir"] = out_.string();
  doc["cache_dir"] = cache_.string();
  doc["started_at"] = started_at_;
  doc["finished_at"] = iso_utc_now();
  doc["outputs"] = outputs_;
  doc["cache"] = {{"hits", hits_}, {"misses", misses_}};
  write_json(meta.command + "-" + hash_hex(config_hash(meta), 8) + ".manifest.json",
             doc);
}

} // namespace jtfu::cli
