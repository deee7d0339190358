// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

// Parameter sweeps: one long-form CSV row per grid point per metric.
// Grid points may run on several threads; rows are emitted in grid order.

#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qcipher/experiment/runner.hpp"

namespace qcipher::experiment {

inline constexpr const char* kThreadsEnv = "QCIPHER_THREADS";

struct SweepAxis {
  std::string parameter;
  std::vector<json> values;
};

using MetricRow = std::pair<std::string, double>;

/// FNV-1a 64-bit, for grid-coordinate seeds.
inline std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t grid_seed(std::uint64_t master, const std::string& parameter, const json& value) {
  return master ^ stable_hash(parameter + "=" + value.dump());
}

inline unsigned sweep_threads() {
  if (const char* env = std::getenv(kThreadsEnv)) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  return 1;
}

/// Axis from the config's "sweep" object, unless given explicitly.
inline SweepAxis sweep_axis_from(const ConfigDocument& doc) {
  const ConfigReader c(doc);
  if (!c.has("sweep")) throw ValidationError(doc.origin + ": no 'sweep' object and no axis given");
  const auto& s = c.at("sweep");
  if (!s.is_object() || !s.contains("parameter") || !s["parameter"].is_string())
    doc.fail("sweep", "expected {\"parameter\": name, \"values\": [...]}");
  SweepAxis axis{s["parameter"].get<std::string>(), {}};
  if (!s.contains("values") || !s["values"].is_array()) doc.fail("sweep", "'values' must be an array");
  for (const auto& v : s["values"]) axis.values.push_back(v);
  return axis;
}

namespace detail {

inline std::vector<MetricRow> y00_metrics(const ConfigReader& c, std::uint64_t seed) {
  const Y00Config cfg = y00_config_from(c);
  std::vector<MetricRow> m;
  m.emplace_back("bob_homodyne_ber", bob_analytic_ber(cfg, BobReceiver::homodyne));
  m.emplace_back("bob_helstrom_ber", bob_helstrom_ber(cfg));
  m.emplace_back("eve_adjacent_pair_error", eve_adjacent_pair_error(cfg));
  const int n_max = static_cast<int>(c.integer_or("n_max", 0));
  if (cfg.points() <= 1024) m.emplace_back("eve_binary_mixed_error", eve_binary_mixed_error(cfg, n_max));
  const auto trials = c.integer_or("sweep_trials", 0);
  if (trials > 0) {
    Y00LinkOptions opt;
    opt.bob = bob_from(c);
    opt.eve = eve_tap_from(c, "eve_model", c.string_or("eve_model", "heterodyne"));
    opt.phase_bins = static_cast<int>(c.integer_or("phase_bins", 64));
    opt.n_max = n_max;
    std::mt19937_64 rng(seed);
    const auto bits = random_bits(static_cast<std::size_t>(trials), rng);
    const auto link = simulate_y00_link(bits, key_from(c, seed), cfg, opt, rng);
    m.emplace_back("bob_ber_mc", link.bob_ber);
    m.emplace_back("eve_bit_error_mc", link.eve_bit_error);
  }
  return m;
}

inline std::vector<MetricRow> cppm_metrics(const ConfigReader& c) {
  const int mm = c.power_of_two("M", 2);
  const double amp = amp_from(c);
  const auto b = eve_cppm_bound(mm, c.number_or("S", amp * amp), log_base_from(c));
  return {{"bob_cppm_error", bob_cppm_error(mm, amp)},
          {"eve_cppm_bound", b.bound},
          {"eve_cppm_bound_vacuous", b.vacuous ? 1.0 : 0.0},
          {"bandwidth_hz", cppm_bandwidth(mm, c.number_or("b_s", 1e9)).hz}};
}

inline std::vector<MetricRow> fppm_metrics(const ConfigReader& c, std::uint64_t seed) {
  const FppmConfig cfg = fppm_config_from(c);
  std::vector<MetricRow> m{{"bob_fppm_error", bob_fppm_error(cfg)},
                           {"eve_fppm_srm_error", eve_fppm_srm_error(cfg)},
                           {"eve_fppm_heterodyne_error", eve_fppm_heterodyne_error(cfg, DistanceConvention::literal)},
                           {"eve_fppm_heterodyne_euclidean", eve_fppm_heterodyne_error(cfg, DistanceConvention::euclidean)},
                           {"bandwidth_hz", cppm_bandwidth(cfg.m_modes, c.number_or("b_s", 1e9)).hz}};
  const int bins = static_cast<int>(c.integer_or("phase_bins", 64));
  if (cfg.j_phases <= 256) m.emplace_back("c1", fppm_masking_report(cfg, 16.0, bins).c1);
  const auto mc = c.integer_or("sweep_trials", 0);
  if (mc > 0) {
    std::mt19937_64 rng(seed);
    m.emplace_back("eve_fppm_heterodyne_mc", eve_fppm_heterodyne_error_mc(cfg, static_cast<std::size_t>(mc), rng));
  }
  return m;
}

inline std::vector<MetricRow> locking_metrics(const ConfigReader& c) {
  const auto calc = locking_calc(c.number("epsilon"), c.number("n"), log_base_from(c));
  return {{"h_k", calc.h_k}, {"h_x_given_y_min", calc.h_x_given_y_min}, {"eta", calc.eta_max}};
}

}  // namespace detail

/// Metrics of one grid point; `doc` already carries the axis value.
inline std::vector<MetricRow> grid_point_metrics(const ConfigDocument& doc, std::uint64_t seed) {
  const ConfigReader c(doc);
  switch (c.scheme()) {
    case Scheme::y00: return detail::y00_metrics(c, seed);
    case Scheme::cppm: return detail::cppm_metrics(c);
    case Scheme::fppm: return detail::fppm_metrics(c, seed);
    case Scheme::locking_calc: return detail::locking_metrics(c);
  }
  return {};
}

/// Long-form CSV: grid_index,parameter,value,seed,metric,estimate.
inline std::string run_sweep(const ConfigDocument& base, const SweepAxis& axis, unsigned threads = sweep_threads()) {
  if (axis.values.empty()) throw ValidationError("sweep: axis '" + axis.parameter + "' has no values");
  if (axis.parameter.empty()) throw ValidationError("sweep: empty axis name");
  const ConfigReader c(base);
  const std::uint64_t master = c.scheme() == Scheme::locking_calc && !c.has("seed") ? 0 : c.seed();

  const std::size_t n = axis.values.size();
  std::vector<std::vector<MetricRow>> results(n);
  std::vector<std::uint64_t> seeds(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        ConfigDocument doc = base;
        doc.value[axis.parameter] = axis.values[i];
        seeds[i] = grid_seed(master, axis.parameter, axis.values[i]);
        results[i] = grid_point_metrics(doc, seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned t = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  CsvWriter w({"grid_index", "parameter", "value", "seed", "metric", "estimate"});
  for (std::size_t i = 0; i < n; ++i) {
    std::string v = axis.values[i].is_string() ? axis.values[i].get<std::string>() : axis.values[i].dump();
    for (const auto& [metric, est] : results[i])
      w.row({std::to_string(i), axis.parameter, v, std::to_string(seeds[i]), metric, fmt(est)});
  }
  return w.str();
}

}  // namespace qcipher::experiment
