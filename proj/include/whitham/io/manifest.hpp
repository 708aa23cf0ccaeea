#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "whitham/errors.hpp"
#include "whitham/io/checksum.hpp"
#include "whitham/io/json_writer.hpp"

#ifndef WHITHAM_VERSION
#define WHITHAM_VERSION "0.1.0"
#endif

namespace whitham::io {

inline std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct FileEntry {
  std::string name;
  std::uintmax_t bytes = 0;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::string status = "complete"; // or "partial"
  std::string error;
  std::string config_text;
  std::string config_hash;
  std::string code_version = WHITHAM_VERSION;
  std::size_t grid_n = 0;
  double grid_period = 0.0;
  std::string scheme;
  std::string started_at;
  std::string finished_at;
  std::vector<double> sample_times;
  std::vector<double> snapshot_times;
  std::map<std::string, std::string> schemas;
  std::vector<FileEntry> files;

  /// Checksums every listed file under `dir`.
  void inventory(const std::filesystem::path& dir, const std::vector<std::string>& names) {
    files.clear();
    for (const auto& n : names) {
      const auto p = dir / n;
      if (!std::filesystem::exists(p)) continue;
      files.push_back({n, std::filesystem::file_size(p), sha256_file(p.string())});
    }
  }

  std::string to_json() const {
    JsonWriter w;
    w.begin_object();
    w.field("command", command);
    w.field("status", status);
    if (!error.empty()) w.field("error", error);
    w.field("code_version", code_version);
    w.field("config", config_text);
    w.field("config_hash", config_hash);
    w.key("grid").begin_object().field("n", grid_n).field("period", grid_period).end_object();
    w.field("scheme", scheme);
    w.field("started_at", started_at);
    w.field("finished_at", finished_at);
    w.field("sample_times", sample_times);
    w.field("snapshot_times", snapshot_times);
    w.key("schemas").begin_object();
    for (const auto& [k, v] : schemas) w.field(k, v);
    w.end_object();
    w.key("files").begin_array();
    for (const auto& f : files)
      w.begin_object().field("name", f.name).field("bytes", static_cast<std::size_t>(f.bytes)).field("sha256", f.sha256).end_object();
    w.end_array();
    w.end_object();
    return w.str();
  }

  void write(const std::filesystem::path& dir) const {
    std::ofstream out(dir / "manifest.json");
    out << to_json() << '\n';
    if (!out) throw std::runtime_error("failed to write manifest in " + dir.string());
  }

  static RunManifest read(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw ConfigError("no manifest.json in '" + dir.string() + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw ConfigError("malformed manifest in '" + dir.string() + "': " + e.what());
    }
    RunManifest m;
    m.command = j.value("command", "");
    m.status = j.value("status", "");
    m.config_text = j.value("config", "");
    m.config_hash = j.value("config_hash", "");
    m.code_version = j.value("code_version", "");
    m.grid_n = j.at("grid").at("n").get<std::size_t>();
    m.grid_period = j.at("grid").at("period").get<double>();
    m.scheme = j.value("scheme", "");
    m.sample_times = j.value("sample_times", std::vector<double>{});
    m.snapshot_times = j.value("snapshot_times", std::vector<double>{});
    for (const auto& f : j.value("files", nlohmann::json::array()))
      m.files.push_back({f.at("name").get<std::string>(), f.at("bytes").get<std::uintmax_t>(),
                         f.at("sha256").get<std::string>()});
    return m;
  }
};

} // namespace whitham::io
