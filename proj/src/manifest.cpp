#include "rhet/manifest.hpp"

#include <openssl/evp.h>

#include <memory>

#include "rhet/error.hpp"

namespace rhet::manifest {

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
    throw Error("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string file_sha256(const std::string& path) { return sha256_hex(io::read_file(path)); }

void RunManifest::add_input(const std::string& path) { inputs.push_back({path, file_sha256(path)}); }
void RunManifest::add_output(const std::string& path) { outputs.push_back({path, file_sha256(path)}); }

io::Json RunManifest::to_json() const {
  io::Json j;
  j["format"] = "rhet-manifest/1";
  j["tool"] = "rhet";
  j["tool_version"] = tool_version;
  j["subcommand"] = subcommand;
  j["argv"] = argv;
  j["master_seed"] = master_seed;
  j["config"] = config;
  auto digests = [](const std::vector<FileDigest>& v) {
    io::Json a = io::Json::array();
    for (const auto& d : v) a.push_back({{"path", d.path}, {"sha256", d.sha256}});
    return a;
  };
  j["inputs"] = digests(inputs);
  j["outputs"] = digests(outputs);
  j["workers"] = workers;
  j["duration_seconds"] = duration_seconds;
  return j;
}

}  // namespace rhet::manifest
