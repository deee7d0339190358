// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment configuration: a single JSON document with optional overrides.
// Validation errors carry the line of the offending key.

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qcipher/errors.hpp"
#include "qcipher/keystream.hpp"

namespace qcipher::experiment {

using nlohmann::json;

inline constexpr std::string_view kArtifactVersion = "1.0.0";

/// Parsed config plus the source text, kept for line lookups.
struct ConfigDocument {
  json value;
  std::string text;
  std::string origin;
  std::vector<std::string> overridden;  // keys set from the command line

  /// 1-based line of the first `"key":` occurrence, or 0.
  int line_of(std::string_view key) const {
    const std::string needle = "\"" + std::string(key) + "\"";
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
      std::size_t after = pos + needle.size();
      while (after < text.size() && (text[after] == ' ' || text[after] == '\t')) ++after;
      if (after < text.size() && text[after] == ':')
        return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
      pos += needle.size();
    }
    return 0;
  }

  [[noreturn]] void fail(std::string_view key, const std::string& msg) const {
    std::string where = origin;
    if (std::find(overridden.begin(), overridden.end(), key) != overridden.end()) {
      where = "--set " + std::string(key);
    } else if (const int line = line_of(key); line > 0) {
      where += ":" + std::to_string(line);
    }
    throw ValidationError(where + ": '" + std::string(key) + "': " + msg);
  }
};

inline ConfigDocument parse_config_text(std::string text, std::string origin = "<config>") {
  ConfigDocument doc{json{}, std::move(text), std::move(origin), {}};
  try {
    doc.value = json::parse(doc.text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, doc.text.size());
    const int line = 1 + static_cast<int>(std::count(doc.text.begin(), doc.text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ValidationError(doc.origin + ":" + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  if (!doc.value.is_object()) throw ValidationError(doc.origin + ":1: config must be a JSON object");
  return doc;
}

inline ConfigDocument load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

/// Applies `key=value` overrides; values parse as JSON, else as strings.
inline void apply_overrides(ConfigDocument& doc, const std::vector<std::string>& sets) {
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("override '" + s + "' must be key=value");
    const std::string key = s.substr(0, eq);
    const std::string raw = s.substr(eq + 1);
    json v;
    try {
      v = json::parse(raw);
    } catch (const json::parse_error&) {
      v = raw;
    }
    doc.value[key] = v;
    doc.overridden.push_back(key);
  }
}

enum class Scheme { y00, cppm, fppm, locking_calc };

inline std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::y00: return "y00";
    case Scheme::cppm: return "cppm";
    case Scheme::fppm: return "fppm";
    case Scheme::locking_calc: return "locking-calc";
  }
  return "?";
}

/// Typed accessors that report the key and line on failure.
class ConfigReader {
 public:
  explicit ConfigReader(const ConfigDocument& doc) : doc_(doc) {}

  const ConfigDocument& doc() const noexcept { return doc_; }
  bool has(std::string_view key) const { return doc_.value.contains(std::string(key)); }

  Scheme scheme() const {
    const auto s = string_or("scheme", "");
    if (s == "y00") return Scheme::y00;
    if (s == "cppm") return Scheme::cppm;
    if (s == "fppm") return Scheme::fppm;
    if (s == "locking-calc") return Scheme::locking_calc;
    if (!has("scheme")) throw ValidationError(doc_.origin + ": missing required key 'scheme'");
    doc_.fail("scheme", "unknown scheme '" + s + "' (expected y00, cppm, fppm or locking-calc)");
  }

  double number(std::string_view key) const {
    const auto& v = at(key);
    if (!v.is_number()) doc_.fail(key, "expected a number");
    return v.get<double>();
  }
  double number_or(std::string_view key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(std::string_view key) const {
    const auto& v = at(key);
    if (!v.is_number_integer() && !(v.is_number() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>()))))
      doc_.fail(key, "expected an integer");
    return v.is_number_integer() ? v.get<long long>() : static_cast<long long>(v.get<double>());
  }
  long long integer_or(std::string_view key, long long fallback) const { return has(key) ? integer(key) : fallback; }

  std::uint64_t seed() const {
    if (!has("seed")) throw ValidationError(doc_.origin + ": missing required key 'seed' (mandatory for Monte Carlo runs)");
    const auto& v = at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      doc_.fail("seed", "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean_or(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_boolean()) doc_.fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::string string_or(std::string_view key, std::string fallback) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_string()) doc_.fail(key, "expected a string");
    return v.get<std::string>();
  }

  /// Positive power of two (M, J).
  int power_of_two(std::string_view key, long long min_value) const {
    const long long v = integer(key);
    if (v < min_value || !is_power_of_two(v))
      doc_.fail(key, "value " + std::to_string(v) + " must be a power of two >= " + std::to_string(min_value));
    return static_cast<int>(v);
  }

  std::optional<SecretKey> key() const {
    if (!has("key")) return std::nullopt;
    try {
      return SecretKey::from_hex(string_or("key", ""));
    } catch (const ValidationError& e) {
      doc_.fail("key", std::string("bad hex key: ") + e.what());
    }
  }

  LfsrSpec lfsr() const { return has("lfsr") ? lfsr_at("lfsr", at("lfsr")) : LfsrSpec::standard16(); }

  /// LfsrSpec from an object under `key` (used for nested sections too).
  LfsrSpec lfsr_at(std::string_view key, const json& v) const {
    if (!v.is_object()) doc_.fail(key, "expected an lfsr object");
    LfsrSpec s;
    try {
      s.register_length = v.value("register_length", 16);
      s.taps = v.value("taps", std::vector<int>{16, 15, 13, 4});
      s.alternate_taps = v.value("alternate_taps", std::vector<std::vector<int>>{});
      s.validate();
    } catch (const json::exception& e) {
      doc_.fail(key, e.what());
    } catch (const ValidationError& e) {
      doc_.fail(key, e.what());
    }
    return s;
  }

  const json& at(std::string_view key) const {
    const auto it = doc_.value.find(std::string(key));
    if (it == doc_.value.end()) throw ValidationError(doc_.origin + ": missing required key '" + std::string(key) + "'");
    return *it;
  }

 private:
  const ConfigDocument& doc_;
};

}  // namespace qcipher::experiment
