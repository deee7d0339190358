// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

// Run manifest: config echo, version, timestamp and SHA-256 of every output.

#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "qcipher/experiment/config.hpp"

namespace qcipher::experiment {

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("sha256: digest failed");
  std::ostringstream o;
  for (unsigned i = 0; i < len; ++i) o << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return o.str();
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream o;
  o << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return o.str();
}

/// Writes outputs into `dir` and records them in the manifest.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError(path.string() + ": cannot open for writing");
    out << content;
    entries_.push_back({{"path", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
  }

  /// manifest.json (not itself listed).
  void write_manifest(const json& config, const std::string& command) {
    json m;
    m["artifact_version"] = kArtifactVersion;
    m["command"] = command;
    m["created_utc"] = utc_timestamp();
    m["config"] = config;
    m["files"] = entries_;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << m.dump(2) << '\n';
  }

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<json> entries_;
};

}  // namespace qcipher::experiment
