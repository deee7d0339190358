// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

// SecurityReport: the per-experiment summary serialized to JSON.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qcipher {

/// Finite numbers as JSON numbers; +inf as "unbounded"; NaN as null.
inline nlohmann::json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "unbounded" : "-unbounded";
  return v;
}

inline nlohmann::json json_number(const std::optional<double>& v) { return v ? json_number(*v) : nlohmann::json(nullptr); }

struct SecurityReport {
  std::string scheme;
  std::uint64_t seed = 0;
  std::optional<double> bob_ber;
  std::optional<double> eve_error;
  std::optional<double> h_x_given_y;
  std::vector<double> h_k_given_y;
  std::optional<double> c1;
  std::string c1_label = "measurement-conditional";
  std::optional<double> h_k;
  std::optional<double> unicity_bound;
  std::optional<double> eta;
  nlohmann::json config;
  nlohmann::json details = nlohmann::json::object();
};

inline nlohmann::json to_json(const SecurityReport& r, std::string_view version) {
  nlohmann::json j;
  j["artifact_version"] = version;
  j["scheme"] = r.scheme;
  j["seed"] = r.seed;
  j["bob_ber"] = json_number(r.bob_ber);
  j["eve_error"] = json_number(r.eve_error);
  j["h_x_given_y"] = json_number(r.h_x_given_y);
  nlohmann::json curve = nlohmann::json::array();
  for (double h : r.h_k_given_y) curve.push_back(json_number(h));
  j["h_k_given_y"] = std::move(curve);
  j["c1"] = json_number(r.c1);
  j["c1_label"] = r.c1_label;
  j["h_k"] = json_number(r.h_k);
  j["unicity_bound"] = json_number(r.unicity_bound);
  j["eta"] = json_number(r.eta);
  j["details"] = r.details;
  j["config"] = r.config;
  return j;
}

}  // namespace qcipher
