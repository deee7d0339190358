// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

// Executes one experiment config and collects its report and side tables.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qcipher/block_cipher.hpp"
#include "qcipher/experiment/config.hpp"
#include "qcipher/experiment/csv.hpp"
#include "qcipher/key_posterior.hpp"
#include "qcipher/report.hpp"
#include "qcipher/security_metrics.hpp"
#include "qcipher/stream_cipher.hpp"
#include "qcipher/symplectic.hpp"

namespace qcipher::experiment {

struct RunArtifacts {
  SecurityReport report;
  std::vector<std::pair<std::string, std::string>> tables;  // file name, CSV content
};

namespace detail {

/// Accessors for a nested object section, failing against the section key.
class Section {
 public:
  Section(const ConfigReader& c, std::string_view key) : c_(c), key_(key) {
    if (c_.has(key)) {
      v_ = c_.at(key);
      if (!v_.is_object()) c_.doc().fail(key, "expected an object");
    } else {
      v_ = json::object();
    }
  }

  bool present() const { return c_.has(key_); }
  bool has(const char* k) const { return v_.contains(k); }

  double number(const char* k, double fallback) const {
    if (!v_.contains(k)) return fallback;
    if (!v_[k].is_number()) c_.doc().fail(key_, std::string("'") + k + "' must be a number");
    return v_[k].get<double>();
  }
  long long integer(const char* k, long long fallback) const {
    if (!v_.contains(k)) return fallback;
    if (!v_[k].is_number_integer()) c_.doc().fail(key_, std::string("'") + k + "' must be an integer");
    return v_[k].get<long long>();
  }
  std::string string(const char* k, std::string fallback) const {
    if (!v_.contains(k)) return fallback;
    if (!v_[k].is_string()) c_.doc().fail(key_, std::string("'") + k + "' must be a string");
    return v_[k].get<std::string>();
  }
  const json& raw() const { return v_; }
  [[noreturn]] void fail(const std::string& msg) const { c_.doc().fail(key_, msg); }

 private:
  const ConfigReader& c_;
  std::string key_;
  json v_;
};

inline double amp_from(const ConfigReader& c) {
  const double amp2 = c.number("amp2");
  if (!(amp2 >= 0.0) || !std::isfinite(amp2)) c.doc().fail("amp2", "mean photon number must be finite and >= 0");
  return std::sqrt(amp2);
}

inline EveTap eve_tap_from(const ConfigReader& c, const std::string& key, const std::string& name) {
  if (name == "heterodyne" || name == "adjacent") return EveTap::heterodyne;
  if (name == "srm") return EveTap::srm;
  if (name == "helstrom-mixed") return EveTap::helstrom_mixed;
  if (name == "exact") return EveTap::exact;
  c.doc().fail(key, "unknown eve model '" + name + "' (heterodyne, srm, helstrom-mixed, adjacent, exact)");
}

inline BobReceiver bob_from(const ConfigReader& c) {
  const auto s = c.string_or("bob_receiver", "exact");
  if (s == "exact") return BobReceiver::exact;
  if (s == "homodyne") return BobReceiver::homodyne;
  if (s == "heterodyne") return BobReceiver::heterodyne;
  c.doc().fail("bob_receiver", "unknown receiver '" + s + "' (exact, homodyne, heterodyne)");
}

inline LogBase log_base_from(const ConfigReader& c) {
  const auto s = c.string_or("log_base", "binary");
  if (s == "binary") return LogBase::binary;
  if (s == "natural") return LogBase::natural;
  c.doc().fail("log_base", "expected 'binary' or 'natural'");
}

inline DistanceConvention convention_from(const ConfigReader& c) {
  const auto s = c.string_or("distance_convention", "literal");
  if (s == "literal") return DistanceConvention::literal;
  if (s == "euclidean") return DistanceConvention::euclidean;
  c.doc().fail("distance_convention", "expected 'literal' or 'euclidean'");
}

inline SecretKey key_from(const ConfigReader& c, std::uint64_t seed) {
  if (auto k = c.key()) return *k;
  return true_random_key(16, EntropySource::reproducible(seed));
}

/// {kind: haar, count, seed} | {kind: dft} | {kind: identity} | {kind: phase, J, count, seed}.
inline TransformFamily family_from(const ConfigReader& c, std::size_t dim) {
  const Section f(c, "family");
  const auto kind = f.string("kind", "haar");
  const long long count = f.integer("count", 16);
  const auto seed = static_cast<std::uint64_t>(f.integer("seed", 1));
  if (kind == "haar") {
    if (!is_power_of_two(count)) f.fail("count must be a power of two");
    return keyed_haar_family(dim, static_cast<std::size_t>(count), seed);
  }
  if (kind == "dft") return TransformFamily({dft_transform(dim)});
  if (kind == "identity") return TransformFamily({AmplitudeTransform::identity(dim)});
  if (kind == "phase") {
    const long long j = f.integer("J", 4);
    if (!is_power_of_two(count) || !is_power_of_two(j)) f.fail("count and J must be powers of two");
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<long long> pick(0, j - 1);
    std::vector<AmplitudeTransform> members;
    for (long long i = 0; i < count; ++i) {
      std::vector<double> ph(dim);
      for (auto& p : ph) p = 2.0 * std::numbers::pi * static_cast<double>(pick(gen)) / static_cast<double>(j);
      members.push_back(phase_randomization_transform(ph));
    }
    return TransformFamily(std::move(members));
  }
  f.fail("unknown family kind '" + kind + "' (haar, dft, identity, phase)");
}

inline Y00Config y00_config_from(const ConfigReader& c) {
  Y00Config cfg;
  cfg.m_bases = c.power_of_two("M", 1);
  cfg.amp = amp_from(c);
  cfg.osk = c.boolean_or("osk", false);
  cfg.lfsr = c.lfsr();
  return cfg;
}

inline FppmConfig fppm_config_from(const ConfigReader& c) {
  FppmConfig cfg;
  cfg.m_modes = c.power_of_two("M", 1);
  cfg.j_phases = c.power_of_two("J", 2);
  cfg.amp = amp_from(c);
  cfg.lfsr = c.lfsr();
  if (c.has("family")) cfg.family = family_from(c, static_cast<std::size_t>(cfg.m_modes));
  return cfg;
}

inline std::vector<std::uint8_t> random_bits(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
  return bits;
}

inline void run_y00(const ConfigReader& c, std::uint64_t seed, RunArtifacts& out) {
  const Y00Config cfg = y00_config_from(c);
  const auto slots = c.integer_or("trials", 10000);
  if (slots < 1) c.doc().fail("trials", "must be >= 1");
  const std::string eve_name = c.string_or("eve_model", "heterodyne");
  Y00LinkOptions opt;
  opt.eve = eve_tap_from(c, "eve_model", eve_name);
  opt.bob = bob_from(c);
  opt.bob_transmittance = c.number_or("bob_transmittance", 1.0);
  if (opt.bob_transmittance < 0.0 || opt.bob_transmittance > 1.0) c.doc().fail("bob_transmittance", "must lie in [0, 1]");
  opt.phase_bins = static_cast<int>(c.integer_or("phase_bins", 64));
  if (opt.phase_bins < 2) c.doc().fail("phase_bins", "must be >= 2");
  opt.n_max = static_cast<int>(c.integer_or("n_max", 0));
  opt.keep_trace = c.boolean_or("slot_csv", false);
  const SecretKey key = key_from(c, seed);
  if (c.has("bob_key")) {
    try {
      opt.bob_key = SecretKey::from_hex(c.string_or("bob_key", ""));
    } catch (const ValidationError& e) {
      c.doc().fail("bob_key", std::string("bad hex key: ") + e.what());
    }
  }

  std::mt19937_64 rng(seed);
  const auto bits = random_bits(static_cast<std::size_t>(slots), rng);
  const auto link = simulate_y00_link(bits, key, cfg, opt, rng);

  auto& r = out.report;
  r.bob_ber = link.bob_ber;
  r.eve_error = link.eve_bit_error;
  r.h_k = static_cast<double>(key.size());
  auto& d = r.details;
  d["slots"] = link.slots;
  d["key_hex"] = key.to_hex();
  d["running_key_bits_per_slot"] = cfg.bits_per_slot();
  d["bob_receiver"] = to_string(opt.bob);
  d["bob_errors"] = link.bob_errors;
  d["bob_analytic_ber"] = bob_analytic_ber(cfg, opt.bob, opt.bob_transmittance);
  d["bob_helstrom_ber"] = bob_helstrom_ber(cfg, opt.bob_transmittance);
  d["eve_model"] = eve_name;
  d["eve_sampled_measurement"] = to_string(opt.eve);
  d["eve_bit_errors"] = link.eve_bit_errors;
  d["eve_symbol_error"] = json_number(link.eve_symbol_error);
  d["eve_adjacent_pair_error"] = eve_adjacent_pair_error(cfg);
  const int n_max = opt.n_max > 0 ? opt.n_max : fock_truncation(cfg.mean_photons());
  d["eve_binary_mixed_error"] = n_max <= 400 ? json_number(eve_binary_mixed_error(cfg, n_max)) : json(nullptr);
  d["n_max"] = n_max;
  d["phase_bins"] = opt.phase_bins;
  d["h_bob_given_kx"] = link.lifting.h_bob_given_kx;
  d["h_eve_given_kx"] = link.lifting.h_eve_given_kx;
  d["bob_determined"] = link.lifting.bob_determined;
  d["eve_randomized"] = link.lifting.eve_randomized;

  if (opt.keep_trace) {
    CsvWriter w({"slot", "chunk", "osk_bit", "bit", "phase_index", "bob_bit", "eve_outcome", "eve_bit"});
    for (std::size_t i = 0; i < link.trace.size(); ++i) {
      const auto& t = link.trace[i];
      w.row({std::to_string(i), std::to_string(t.chunk), std::to_string(t.osk_bit), std::to_string(t.bit),
             std::to_string(t.phase_index), std::to_string(t.bob_bit), std::to_string(t.eve_outcome),
             std::to_string(t.eve_bit)});
    }
    out.tables.emplace_back("slots.csv", w.str());
  }

  const Section u(c, "unicity");
  if (u.present()) {
    Y00Config ucfg = cfg;
    if (u.has("lfsr")) ucfg.lfsr = c.lfsr_at("unicity", u.raw()["lfsr"]);
    const auto key_bits = static_cast<int>(u.integer("key_bits", 8));
    const auto n = static_cast<std::size_t>(u.integer("slots", 64));
    const auto reps = static_cast<std::size_t>(u.integer("realizations", 16));
    const auto attack_name = u.string("attack", "known-plaintext");
    if (attack_name != "known-plaintext" && attack_name != "ciphertext-only")
      u.fail("attack must be 'known-plaintext' or 'ciphertext-only'");
    const auto attack = attack_name == "known-plaintext" ? AttackKind::known_plaintext : AttackKind::ciphertext_only;
    const auto tap_name = u.string("eve_model", eve_name);
    Y00KeyModel model(ucfg, key_bits, eve_tap_from(c, "unicity", tap_name), opt.phase_bins, opt.n_max);
    std::mt19937_64 urng(seed ^ 0x756e6963ULL);
    const auto pt = random_bits(n, urng);
    const auto est = conditional_key_entropy(model, pt, attack, reps, urng);
    r.h_k_given_y = est.expected_entropy;
    d["unicity"] = {{"key_bits", key_bits},
                    {"attack", attack_name},
                    {"eve_model", tap_name},
                    {"realizations", reps},
                    {"plaintext", "uniform i.i.d."},
                    {"prior_entropy", est.prior_entropy},
                    {"unicity_slots", est.unicity_slots ? json(*est.unicity_slots) : json("not reached")}};
    CsvWriter w({"n", "expected_entropy", "realization_entropy"});
    for (std::size_t i = 0; i < est.expected_entropy.size(); ++i)
      w.row({std::to_string(i + 1), fmt(est.expected_entropy[i]), fmt(est.realization_entropy[i])});
    out.tables.emplace_back("entropy_curve.csv", w.str());
  }

  const Section e(c, "equivocation");
  if (e.present()) {
    Y00Config ecfg = cfg;
    if (e.has("lfsr")) ecfg.lfsr = c.lfsr_at("equivocation", e.raw()["lfsr"]);
    const auto key_bits = static_cast<int>(e.integer("key_bits", 16));
    const auto n = static_cast<std::size_t>(e.integer("slots", 64));
    const auto tap_name = e.string("eve_model", eve_name);
    Y00KeyModel model(ecfg, key_bits, eve_tap_from(c, "equivocation", tap_name), opt.phase_bins, opt.n_max);
    std::mt19937_64 erng(seed ^ 0x65717569ULL);
    const auto est = plaintext_equivocation(model, n, static_cast<std::size_t>(e.integer("realizations", 4)),
                                            static_cast<std::size_t>(e.integer("samples", 16)), erng);
    r.h_x_given_y = est.h_x_given_y;
    r.h_k = static_cast<double>(key_bits);
    if (est.h_x_given_y > 0.0) r.eta = locking_eta(key_bits, est.h_x_given_y);
    d["equivocation"] = {{"key_bits", key_bits},
                         {"slots", n},
                         {"eve_model", tap_name},
                         {"h_x", est.h_x},
                         {"h_x_given_y", est.h_x_given_y},
                         {"h_k_given_y", est.h_k_given_y},
                         {"verdict", to_string(shannon_bound_check(est.h_x_given_y, key_bits))}};
  }
}

inline void run_cppm(const ConfigReader& c, std::uint64_t seed, RunArtifacts& out) {
  const int m = c.power_of_two("M", 2);
  const double amp = amp_from(c);
  const double s = c.number_or("S", amp * amp);
  const long long bound_m = c.has("bound_M") ? c.power_of_two("bound_M", 2) : m;
  const auto base = log_base_from(c);
  const auto trials = c.integer_or("trials", 0);
  auto& r = out.report;
  auto& d = r.details;
  d["bob_cppm_error"] = bob_cppm_error(m, amp);
  if (trials > 0) {
    if (m > 1024) c.doc().fail("M", "Monte Carlo CPPM simulation is limited to M <= 1024");
    const auto family = family_from(c, static_cast<std::size_t>(m));
    const SecretKey key = key_from(c, seed);
    std::mt19937_64 rng(seed);
    const auto link = simulate_cppm_link(static_cast<std::size_t>(trials), amp, family, key, c.lfsr(), rng);
    r.bob_ber = link.symbol_error;
    d["trials"] = trials;
    d["bob_symbol_errors"] = link.symbol_errors;
    d["family_size"] = family.size();
    d["key_hex"] = key.to_hex();
  } else {
    r.bob_ber = bob_cppm_error(m, amp);
  }
  const auto b = eve_cppm_bound(bound_m, s, base);
  const auto b_other = eve_cppm_bound(bound_m, s, base == LogBase::binary ? LogBase::natural : LogBase::binary);
  r.eve_error = b.bound;
  d["eve_bound"] = {{"M", bound_m},     {"S", s},
                    {"L", b.log_base_l}, {"log_base", base == LogBase::binary ? "binary" : "natural"},
                    {"bound", b.bound}, {"z_opt", b.z_opt},
                    {"z_at_boundary", b.z_at_boundary}, {"vacuous", b.vacuous},
                    {"converged", b.converged}, {"grid_residual", b.grid_residual},
                    {"bound_other_log_base", b_other.bound}};
  const double b_s = c.number_or("b_s", 1e9);
  const double budget = c.number_or("bandwidth_budget_hz", kBandwidthBudgetHz);
  const auto w = cppm_bandwidth(bound_m, b_s, budget);
  d["bandwidth_hz"] = w.hz;
  d["bandwidth_feasible"] = w.feasible;
}

inline void run_fppm(const ConfigReader& c, std::uint64_t seed, RunArtifacts& out) {
  const FppmConfig cfg = fppm_config_from(c);
  const auto conv = convention_from(c);
  const auto trials = c.integer_or("trials", 0);
  const auto mc = c.integer_or("mc_samples", 100000);
  const int bins = static_cast<int>(c.integer_or("phase_bins", 64));
  if (bins < 2) c.doc().fail("phase_bins", "must be >= 2");
  const SecretKey key = key_from(c, seed);
  std::mt19937_64 rng(seed);
  auto& r = out.report;
  auto& d = r.details;
  d["key_hex"] = key.to_hex();
  d["log10_ciphertext_space"] = cfg.log10_ciphertext_space();
  d["bob_sign_union_error"] = bob_fppm_error(cfg);
  if (trials > 0) {
    const auto link = simulate_fppm_link(static_cast<std::size_t>(trials), cfg, key, false, rng);
    r.bob_ber = link.symbol_error;
    d["trials"] = trials;
    d["bob_symbol_errors"] = link.symbol_errors;
    d["bob_ambiguous_blocks"] = link.ambiguous;
  } else {
    r.bob_ber = bob_fppm_error(cfg);
  }
  const double het = eve_fppm_heterodyne_error(cfg, conv);
  r.eve_error = het;
  d["eve_fppm_srm_error"] = eve_fppm_srm_error(cfg);
  d["eve_fppm_heterodyne_error"] = het;
  d["distance_convention"] = conv == DistanceConvention::literal ? "literal" : "euclidean";
  if (mc > 0) d["eve_fppm_heterodyne_mc"] = eve_fppm_heterodyne_error_mc(cfg, static_cast<std::size_t>(mc), rng);
  d["mc_samples"] = mc;
  const double h_k = c.number_or("h_k", static_cast<double>(key.size()));
  const auto mask = fppm_masking_report(cfg, h_k, bins);
  r.c1 = mask.c1;
  r.h_k = h_k;
  r.unicity_bound = mask.unicity_bound;
  d["phase_bins"] = bins;
  d["unicity_unbounded"] = mask.unbounded;
  const auto w = cppm_bandwidth(cfg.m_modes, c.number_or("b_s", 1e9), c.number_or("bandwidth_budget_hz", kBandwidthBudgetHz));
  d["bandwidth_hz"] = w.hz;
  d["bandwidth_feasible"] = w.feasible;
}

inline void run_locking(const ConfigReader& c, RunArtifacts& out) {
  const double eps = c.number("epsilon");
  if (!(eps > 0.0 && eps < 1.0)) c.doc().fail("epsilon", "must lie in (0, 1)");
  const double n = c.number("n");
  if (!(n >= 1.0)) c.doc().fail("n", "must be >= 1");
  const auto base = log_base_from(c);
  const auto calc = locking_calc(eps, n, base);
  auto& r = out.report;
  r.h_k = calc.h_k;
  r.h_x_given_y = calc.h_x_given_y_min;
  r.eta = calc.eta_max;
  r.details["epsilon"] = eps;
  r.details["n_bits"] = n;
  r.details["h_x_given_y_is_lower_bound"] = true;
  r.details["verdict"] = to_string(shannon_bound_check(calc.h_x_given_y_min, calc.h_k));

  CsvWriter w({"n_bits", "epsilon", "h_k", "eta"});
  bool decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  for (int e = 10; e <= 20; ++e) {
    const double nb = std::ldexp(1.0, e);
    const auto s = locking_calc(1.0 / nb, nb, base);
    decreasing = decreasing && s.eta_max < prev;
    prev = s.eta_max;
    w.row({fmt(nb), fmt(1.0 / nb), fmt(s.h_k), fmt(s.eta_max)});
  }
  r.details["scaling_decreasing"] = decreasing;
  out.tables.emplace_back("locking_scaling.csv", w.str());
}

}  // namespace detail

inline RunArtifacts run_experiment(const ConfigDocument& doc) {
  const ConfigReader c(doc);
  const Scheme scheme = c.scheme();
  RunArtifacts out;
  out.report.scheme = to_string(scheme);
  out.report.config = doc.value;
  if (scheme == Scheme::locking_calc) {
    out.report.seed = c.has("seed") ? c.seed() : 0;
    detail::run_locking(c, out);
    return out;
  }
  const auto seed = c.seed();
  out.report.seed = seed;
  switch (scheme) {
    case Scheme::y00: detail::run_y00(c, seed, out); break;
    case Scheme::cppm: detail::run_cppm(c, seed, out); break;
    case Scheme::fppm: detail::run_fppm(c, seed, out); break;
    case Scheme::locking_calc: break;
  }
  return out;
}

}  // namespace qcipher::experiment
