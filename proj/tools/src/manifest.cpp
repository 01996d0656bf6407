#include "aispath/cli/manifest.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace aispath::cli {

namespace fs = std::filesystem;

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("sha256 init failed");
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw std::runtime_error("sha256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) throw std::runtime_error("sha256 final failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out.push_back(kHex[md[i] >> 4]);
      out.push_back(kHex[md[i] & 15]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::string digest_path(const fs::path& path) {
  if (!fs::is_directory(path)) return sha256_file(path);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(path))
    if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string listing;
  for (const auto& f : files)
    listing += fs::relative(f, path).generic_string() + " " + sha256_file(f) + "\n";
  return sha256_hex(listing);
}

void RunManifest::add_input(const fs::path& p) { inputs.emplace_back(p.string(), digest_path(p)); }
void RunManifest::add_output(const fs::path& p) { outputs.emplace_back(p.string(), digest_path(p)); }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool_version"] = tool_version;
  j["command"] = command;
  j["config"] = config;
  j["inputs"] = nlohmann::json::array();
  for (const auto& [p, d] : inputs) j["inputs"].push_back({{"path", p}, {"sha256", d}});
  j["outputs"] = nlohmann::json::array();
  for (const auto& [p, d] : outputs) j["outputs"].push_back({{"path", p}, {"sha256", d}});
  j["timings_s"] = timings;
  j["seeds"] = seeds;
  j["counts"] = counts;
  return j;
}

void RunManifest::write_for(const fs::path& artifact) const {
  const fs::path out = fs::is_directory(artifact) ? artifact / "manifest.json"
                                                  : fs::path(artifact.string() + ".manifest.json");
  std::ofstream f(out, std::ios::trunc);
  if (!f) throw std::ios_base::failure("cannot write " + out.string());
  f << to_json().dump(2) << '\n';
}

}  // namespace aispath::cli
