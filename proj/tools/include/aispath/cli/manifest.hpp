#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace aispath::cli {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);
/// Files hash directly; directories hash the sorted list of
/// "<relative path> <sha256>" lines of their regular files, skipping
/// manifest.json.
std::string digest_path(const std::filesystem::path& path);

struct RunManifest {
  std::string tool_version;
  std::string command;
  nlohmann::json config;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  std::vector<std::pair<std::string, std::string>> outputs;
  std::map<std::string, double> timings;  // stage -> seconds
  std::map<std::string, std::uint64_t> seeds;
  nlohmann::json counts = nlohmann::json::object();

  void add_input(const std::filesystem::path& p);
  void add_output(const std::filesystem::path& p);
  nlohmann::json to_json() const;
  /// `<dir>/manifest.json` for directories, `<file>.manifest.json` otherwise.
  void write_for(const std::filesystem::path& artifact) const;
};

}  // namespace aispath::cli
