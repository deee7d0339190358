// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file block_cipher.hpp
 * @brief Coherent-PPM (CPPM) and frequency-phase PPM (FPPM) block ciphers.
 *
 * CPPM scrambles a PPM codeword with a keyed unitary over M slots; Bob undoes
 * it and counts photons. FPPM marks the pulse position by sign over M
 * constant-amplitude modes and hides it behind keyed J-ary phase offsets.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "qcipher/coherent.hpp"
#include "qcipher/keystream.hpp"
#include "qcipher/measurements.hpp"
#include "qcipher/security_metrics.hpp"
#include "qcipher/symplectic.hpp"

namespace qcipher {

// ---------------------------------------------------------------- CPPM

struct PpmCodeword {
  int symbol;  // 1-based slot index
  CoherentVector vector;
};

inline PpmCodeword ppm_encode(int m, int slots, double amp) {
  detail::require(slots >= 1, "ppm_encode: M must be >= 1");
  detail::require(m >= 1 && m <= slots, "ppm_encode: symbol " + std::to_string(m) + " outside [1, M]");
  detail::require(amp >= 0.0 && std::isfinite(amp), "ppm_encode: amplitude must be finite and >= 0");
  std::vector<Amplitude> a(static_cast<std::size_t>(slots), Amplitude{});
  a[static_cast<std::size_t>(m - 1)] = Amplitude{amp, 0.0};
  return {m, CoherentVector(std::move(a))};
}

/// U(chunk)·|Ψ(X)⟩; only unitary families are accepted.
inline CoherentVector cppm_randomize(const PpmCodeword& cw, std::uint64_t chunk, const TransformFamily& family) {
  detail::require(family.all_unitary(), "cppm_randomize: cipher families must be unitary");
  return apply_transform(family.at(chunk), cw.vector);
}

/// (1 − 1/M)·e^{−|α|²}: no click anywhere, then a uniform guess.
inline double bob_cppm_error(int slots, double amp) {
  detail::require(slots >= 2, "bob_cppm_error: M must be >= 2");
  return (1.0 - 1.0 / slots) * std::exp(-amp * amp);
}

struct CppmLinkResult {
  std::size_t trials = 0;
  std::size_t symbol_errors = 0;
  double symbol_error = 0.0;
};

/// Keyed CPPM link: a family member per block chosen by the running key, Bob
/// inverts it with his own key and counts photons slot by slot.
template <class Rng>
CppmLinkResult simulate_cppm_link(std::size_t trials, double amp, const TransformFamily& family, const SecretKey& key,
                                  const LfsrSpec& lfsr, Rng& rng, std::optional<SecretKey> bob_key = std::nullopt) {
  const int slots = static_cast<int>(family.dimension());
  detail::require(slots >= 2, "simulate_cppm_link: M must be >= 2");
  auto alice = make_running_key_stream(lfsr, key);
  auto bob = make_running_key_stream(lfsr, bob_key.value_or(key));
  std::uniform_int_distribution<int> sym(1, slots);
  CppmLinkResult out;
  out.trials = trials;
  std::vector<int> clicks;
  for (std::size_t t = 0; t < trials; ++t) {
    const int m = sym(rng);
    const auto tx = cppm_randomize(ppm_encode(m, slots, amp), alice.next_running_key(static_cast<long long>(family.size())), family);
    const auto rx = apply_transform(inverse_transform(family.at(bob.next_running_key(static_cast<long long>(family.size())))), tx);
    clicks.clear();
    for (int i = 0; i < slots; ++i) {
      std::poisson_distribution<long long> photons(std::norm(rx[static_cast<std::size_t>(i)]));
      if (photons(rng) > 0) clicks.push_back(i + 1);
    }
    int guess = 0;
    if (clicks.empty()) guess = sym(rng);
    else guess = clicks[std::uniform_int_distribution<std::size_t>(0, clicks.size() - 1)(rng)];
    out.symbol_errors += static_cast<std::size_t>(guess != m);
  }
  out.symbol_error = trials ? static_cast<double>(out.symbol_errors) / static_cast<double>(trials) : 0.0;
  return out;
}

namespace detail {

/// log Φ(x), accurate deep in the lower tail.
inline double log_normal_cdf(double x) {
  if (x > -30.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  const double x2 = x * x;
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

}  // namespace detail

struct CppmBound {
  double bound = 0.0;  // clamped to [0, 1]
  double z_opt = 0.0;
  double log_base_l = 0.0;  // L = log M in the chosen base
  bool z_at_boundary = false;
  bool vacuous = false;  // maximiser pinned to the search edge
  double grid_residual = 0.0;
  bool converged = false;
};

inline constexpr double kCppmZLow = -10.0;

/// 1 − Φ(z)^L·Φ(z − 2S) maximised over z ∈ [−10, 2S + 10].
///
/// The product is minimised in the log domain by Brent's method; both
/// endpoints are also evaluated and a 4001-point grid bounds the residual.
inline CppmBound eve_cppm_bound(long long slots, double s, LogBase base = LogBase::binary) {
  detail::require(slots >= 2, "eve_cppm_bound: M must be >= 2");
  detail::require(s >= 0.0 && std::isfinite(s), "eve_cppm_bound: S must be finite and >= 0");
  const double l = base == LogBase::binary ? std::log2(static_cast<double>(slots)) : std::log(static_cast<double>(slots));
  auto log_prod = [&](double z) { return l * detail::log_normal_cdf(z) + detail::log_normal_cdf(z - 2.0 * s); };
  auto bound_at = [&](double z) { return std::clamp(-std::expm1(log_prod(z)), 0.0, 1.0); };
  const double lo = kCppmZLow;
  const double hi = 2.0 * s + 10.0;

  const auto [zb, fb] = boost::math::tools::brent_find_minima(log_prod, lo, hi, std::numeric_limits<double>::digits / 2);
  double z = zb;
  double best = fb;
  for (double e : {lo, hi})
    if (log_prod(e) < best) {
      best = log_prod(e);
      z = e;
    }

  CppmBound out;
  out.z_opt = z;
  out.log_base_l = l;
  out.bound = bound_at(z);
  double grid_best = out.bound;
  constexpr int kGrid = 4000;
  for (int i = 0; i <= kGrid; ++i) grid_best = std::max(grid_best, bound_at(lo + (hi - lo) * i / kGrid));
  out.grid_residual = grid_best - out.bound;
  out.converged = out.grid_residual <= 1e-10;
  out.z_at_boundary = std::abs(z - lo) <= 1e-6 || std::abs(z - hi) <= 1e-6;
  out.vacuous = out.z_at_boundary;
  return out;
}

inline constexpr double kBandwidthBudgetHz = 10e12;

struct Bandwidth {
  double hz = 0.0;
  bool feasible = true;
};

/// W ≈ M·B_S against a baseband budget.
inline Bandwidth cppm_bandwidth(long long slots, double b_s, double budget_hz = kBandwidthBudgetHz) {
  detail::require(slots >= 1 && b_s > 0.0 && budget_hz > 0.0, "cppm_bandwidth: inputs must be positive");
  const double w = static_cast<double>(slots) * b_s;
  return {w, w <= budget_hz};
}

// ---------------------------------------------------------------- FPPM

struct FppmConfig {
  int m_modes = 4;
  int j_phases = 8;
  double amp = 1.0;
  LfsrSpec lfsr = LfsrSpec::standard16();
  /// Optional keyed mode-mixing family (unitary, dimension M).
  std::optional<TransformFamily> family;

  void validate() const {
    detail::require(m_modes >= 1 && is_power_of_two(m_modes),
                    "FppmConfig: M = " + std::to_string(m_modes) + " must be a power of two");
    detail::require(j_phases >= 2 && is_power_of_two(j_phases),
                    "FppmConfig: J = " + std::to_string(j_phases) + " must be a power of two >= 2");
    detail::require(amp >= 0.0 && std::isfinite(amp), "FppmConfig: amplitude must be finite and >= 0");
    lfsr.validate();
    if (family) {
      detail::require(family->dimension() == static_cast<std::size_t>(m_modes), "FppmConfig: family dimension != M");
      detail::require(family->all_unitary(), "FppmConfig: cipher families must be unitary");
      family->selector_bits();
    }
  }

  /// log10 of the ciphertext-space size J^M.
  double log10_ciphertext_space() const { return m_modes * std::log10(static_cast<double>(j_phases)); }
};

/// Sign-marked binary-PSK PPM: phase 0 at slot m, π elsewhere.
inline CoherentVector fppm_encode(int m, const FppmConfig& cfg) {
  detail::require(m >= 1 && m <= cfg.m_modes, "fppm_encode: symbol " + std::to_string(m) + " outside [1, M]");
  std::vector<Amplitude> a(static_cast<std::size_t>(cfg.m_modes), Amplitude{-cfg.amp, 0.0});
  a[static_cast<std::size_t>(m - 1)] = Amplitude{cfg.amp, 0.0};
  return CoherentVector(std::move(a));
}

/// Running-key material for one block.
struct FppmBlockKey {
  std::vector<std::uint64_t> offsets;  // J-ary phase index per mode
  std::optional<std::uint64_t> unitary;
};

inline FppmBlockKey next_fppm_block_key(RunningKeyStream& stream, const FppmConfig& cfg) {
  FppmBlockKey k;
  k.offsets.reserve(static_cast<std::size_t>(cfg.m_modes));
  for (int i = 0; i < cfg.m_modes; ++i) k.offsets.push_back(stream.next_running_key(cfg.j_phases));
  if (cfg.family) k.unitary = stream.next_running_key(static_cast<long long>(cfg.family->size()));
  return k;
}

inline std::vector<double> fppm_offset_phases(const FppmBlockKey& key, const FppmConfig& cfg) {
  std::vector<double> ph;
  ph.reserve(key.offsets.size());
  for (auto o : key.offsets) ph.push_back(2.0 * std::numbers::pi * static_cast<double>(o) / cfg.j_phases);
  return ph;
}

/// Per-mode keyed phase offsets, then the keyed mode unitary when configured.
inline CoherentVector fppm_randomize(const CoherentVector& v, const FppmBlockKey& key, const FppmConfig& cfg) {
  detail::require(v.modes() == static_cast<std::size_t>(cfg.m_modes), "fppm_randomize: mode count != M");
  detail::require(key.offsets.size() == v.modes(), "fppm_randomize: block key size != M");
  CoherentVector out = apply_transform(phase_randomization_transform(fppm_offset_phases(key, cfg)), v);
  if (cfg.family) {
    detail::require(key.unitary.has_value(), "fppm_randomize: block key lacks a unitary index");
    out = apply_transform(cfg.family->at(*key.unitary), out);
  }
  return out;
}

/// Undoes the keyed operations on an amplitude vector (Bob's optics).
inline CoherentVector fppm_unrandomize(const CoherentVector& v, const FppmBlockKey& key, const FppmConfig& cfg) {
  CoherentVector out = v;
  if (cfg.family) {
    detail::require(key.unitary.has_value(), "fppm_unrandomize: block key lacks a unitary index");
    out = apply_transform(inverse_transform(cfg.family->at(*key.unitary)), out);
  }
  std::vector<double> ph = fppm_offset_phases(key, cfg);
  for (auto& p : ph) p = -p;
  return apply_transform(phase_randomization_transform(ph), out);
}

struct FppmDecision {
  int symbol = 1;
  bool ambiguous = false;  // zero or several slots decided "0-phase"
};

/// Per-mode sign decisions on de-randomized in-phase values; ties between
/// candidates go to the maximum-likelihood slot argmax Re.
inline FppmDecision fppm_decide(std::span<const double> in_phase) {
  detail::require(!in_phase.empty(), "fppm_decide: empty block");
  int candidates = 0;
  int first = 0;
  int best = 0;
  for (std::size_t i = 0; i < in_phase.size(); ++i) {
    if (in_phase[i] > 0.0) {
      if (candidates == 0) first = static_cast<int>(i);
      ++candidates;
    }
    if (in_phase[i] > in_phase[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  if (candidates == 1) return {first + 1, false};
  return {best + 1, true};
}

/// Exact (noiseless) decode of a received amplitude vector.
inline FppmDecision fppm_bob_decode(const CoherentVector& received, const FppmBlockKey& key, const FppmConfig& cfg) {
  const CoherentVector base = fppm_unrandomize(received, key, cfg);
  std::vector<double> re;
  re.reserve(base.modes());
  for (std::size_t i = 0; i < base.modes(); ++i) re.push_back(base[i].real());
  return fppm_decide(re);
}

/// 1 − (1 − Q(|α|/σ))^M: some per-mode homodyne sign decision fails. This
/// upper-bounds the symbol error once ambiguous blocks go to argmax Re.
inline double bob_fppm_error(const FppmConfig& cfg, double sigma = kHomodyneSigma) {
  cfg.validate();
  return 1.0 - std::pow(1.0 - gaussian_tail(cfg.amp / sigma), cfg.m_modes);
}

struct FppmLinkResult {
  std::size_t trials = 0;
  std::size_t symbol_errors = 0;
  std::size_t ambiguous = 0;
  double symbol_error = 0.0;
};

/// Keyed FPPM link with per-mode homodyne detection (σ = 1/√2) after Bob's
/// inverse operations; `exact` skips the detection noise.
template <class Rng>
FppmLinkResult simulate_fppm_link(std::size_t trials, const FppmConfig& cfg, const SecretKey& key, bool exact, Rng& rng,
                                  std::optional<SecretKey> bob_key = std::nullopt) {
  cfg.validate();
  auto alice = make_running_key_stream(cfg.lfsr, key);
  auto bob = make_running_key_stream(cfg.lfsr, bob_key.value_or(key));
  std::uniform_int_distribution<int> sym(1, cfg.m_modes);
  std::normal_distribution<double> noise(0.0, kHomodyneSigma);
  FppmLinkResult out;
  out.trials = trials;
  std::vector<double> re(static_cast<std::size_t>(cfg.m_modes));
  for (std::size_t t = 0; t < trials; ++t) {
    const int m = sym(rng);
    const auto tx = fppm_randomize(fppm_encode(m, cfg), next_fppm_block_key(alice, cfg), cfg);
    const auto base = fppm_unrandomize(tx, next_fppm_block_key(bob, cfg), cfg);
    for (std::size_t i = 0; i < re.size(); ++i) re[i] = base[i].real() + (exact ? 0.0 : noise(rng));
    const auto d = fppm_decide(re);
    out.ambiguous += static_cast<std::size_t>(d.ambiguous);
    out.symbol_errors += static_cast<std::size_t>(d.symbol != m);
  }
  out.symbol_error = trials ? static_cast<double>(out.symbol_errors) / static_cast<double>(trials) : 0.0;
  return out;
}

/// 1 − s^M with s the single-mode SRM success on J-PSK.
inline double eve_fppm_srm_error(const FppmConfig& cfg) {
  cfg.validate();
  const double s = 1.0 - srm_symmetric_psk(cfg.j_phases, cfg.amp).error;
  return 1.0 - std::pow(s, cfg.m_modes);
}

/// 1 − erf(Δ/2σ_he)^M.
inline double eve_fppm_heterodyne_error(const FppmConfig& cfg, DistanceConvention conv = DistanceConvention::literal) {
  cfg.validate();
  const double s = 1.0 - heterodyne_psk_error(cfg.j_phases, cfg.amp, conv);
  return 1.0 - std::pow(s, cfg.m_modes);
}

/// Monte Carlo counterpart with nearest-phase heterodyne decisions per mode.
template <class Rng>
double eve_fppm_heterodyne_error_mc(const FppmConfig& cfg, std::size_t samples, Rng& rng) {
  cfg.validate();
  const double s = 1.0 - heterodyne_psk_error_mc(cfg.j_phases, cfg.amp, samples, rng);
  return 1.0 - std::pow(s, cfg.m_modes);
}

/// Eve's per-mode channel: running-key phase chunk → heterodyne phase bin.
inline DiscreteChannel fppm_eve_channel(const FppmConfig& cfg, int bins = 64) {
  cfg.validate();
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(cfg.j_phases));
  for (int k = 0; k < cfg.j_phases; ++k)
    rows.push_back(heterodyne_phase_bin_probabilities(std::polar(cfg.amp, 2.0 * std::numbers::pi * k / cfg.j_phases), bins));
  return DiscreteChannel(std::move(rows));
}

struct MaskingReport {
  double c1 = 0.0;  // bits per mode, for the declared measurement (not maximised)
  double h_k = 0.0;
  double unicity_bound = 0.0;  // +inf when c1 = 0
  bool unbounded = false;
  int bins = 64;
  std::string measurement = "heterodyne";
};

/// C₁ for uniform running-key chunks and the unicity bound H(K)/C₁.
inline MaskingReport fppm_masking_report(const FppmConfig& cfg, double h_k, int bins = 64) {
  const auto ch = fppm_eve_channel(cfg, bins);
  bool identical = true;
  for (std::size_t x = 1; x < ch.inputs() && identical; ++x)
    for (std::size_t y = 0; y < ch.outputs(); ++y)
      if (ch(x, y) != ch(0, y)) {
        identical = false;
        break;
      }
  MaskingReport r;
  r.bins = bins;
  r.h_k = h_k;
  r.c1 = identical ? 0.0 : mutual_information(ch, DiscreteDistribution::uniform(ch.inputs()));
  r.unicity_bound = unicity_lower_bound(h_k, r.c1);
  r.unbounded = std::isinf(r.unicity_bound);
  return r;
}

}  // namespace qcipher
