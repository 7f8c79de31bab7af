#pragma once

// Reproducibility record written next to every CLI output.

#include <string>
#include <vector>

#include "rhet/io.hpp"

namespace rhet::manifest {

inline constexpr const char* tool_version = "0.1.0";

std::string sha256_hex(const std::string& bytes);
std::string file_sha256(const std::string& path);

struct FileDigest {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;
  io::Json config;
  std::uint64_t master_seed = 0;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  int workers = 1;
  double duration_seconds = 0.0;

  void add_input(const std::string& path);
  void add_output(const std::string& path);
  io::Json to_json() const;
};

}  // namespace rhet::manifest
