// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file stream_cipher.hpp
 * @brief Y-00 (αη) keyed phase encryption of binary data, legitimate
 * decryption, overlap selection keying, and eavesdropper models.
 *
 * Constellation: 2M points, index p at phase π·p/M, data value p & 1, so
 * neighbouring points always carry opposite bits. Basis j holds the bit-0
 * point 2j and the bit-1 point (2j + s) mod 2M with s = M + 1 (s = 1 when
 * M = 1); the basis is selected by a log2(M)-bit running-key chunk and the
 * inverse map is the rotation by −2πj/M.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcipher/coherent.hpp"
#include "qcipher/keystream.hpp"
#include "qcipher/measurements.hpp"
#include "qcipher/security_metrics.hpp"

namespace qcipher {

struct Y00Config {
  int m_bases = 1;
  double amp = 0.0;  // |α|
  bool osk = false;
  LfsrSpec lfsr = LfsrSpec::standard16();

  void validate() const {
    detail::require(m_bases >= 1 && is_power_of_two(m_bases),
                    "Y00Config: M = " + std::to_string(m_bases) + " must be a power of two");
    detail::require(amp >= 0.0 && std::isfinite(amp), "Y00Config: amplitude must be finite and >= 0");
    lfsr.validate();
  }

  int points() const noexcept { return 2 * m_bases; }
  double mean_photons() const noexcept { return amp * amp; }
  /// Running-key bits consumed per slot.
  int bits_per_slot() const { return log2_exact(m_bases) + (osk ? 1 : 0); }
};

/// Index distance from the bit-0 to the bit-1 point of a basis (always odd).
inline int partner_offset(int m_bases) { return m_bases % 2 == 1 ? m_bases : m_bases + 1; }

inline double index_phase(int phase_index, int m_bases) {
  return std::numbers::pi * phase_index / m_bases;
}

inline double basis_phase(std::uint64_t chunk, int m_bases) {
  return 2.0 * std::numbers::pi * static_cast<double>(chunk) / m_bases;
}

inline Amplitude constellation_point(const Y00Config& cfg, int phase_index) {
  return std::polar(cfg.amp, index_phase(phase_index, cfg.m_bases));
}

inline PskConstellation y00_constellation(const Y00Config& cfg) { return PskConstellation(cfg.points(), cfg.amp); }

struct CipherSlot {
  int phase_index = 0;
  Amplitude amplitude{};
};

inline CipherSlot encrypt_slot(int bit, std::uint64_t chunk, int osk_bit, const Y00Config& cfg) {
  detail::require(bit == 0 || bit == 1, "encrypt_slot: bit must be 0 or 1");
  detail::require(osk_bit == 0 || osk_bit == 1, "encrypt_slot: osk bit must be 0 or 1");
  detail::require(chunk < static_cast<std::uint64_t>(cfg.m_bases),
                  "encrypt_slot: chunk " + std::to_string(chunk) + " outside [0, M)");
  const int eff = bit ^ osk_bit;
  const int n = cfg.points();
  const int p = (2 * static_cast<int>(chunk) + eff * partner_offset(cfg.m_bases)) % n;
  return {p, constellation_point(cfg, p)};
}

namespace detail {

/// Unit vector from the bit-1 point to the bit-0 point of basis 0.
inline Complex y00_decision_axis(int m_bases) {
  const Complex d = 1.0 - std::polar(1.0, index_phase(partner_offset(m_bases), m_bases));
  return d / std::abs(d);
}

}  // namespace detail

/// Half the distance between the two points of a basis, in units of |α|.
inline double y00_half_gap(int m_bases) {
  return std::abs(1.0 - std::polar(1.0, index_phase(partner_offset(m_bases), m_bases))) / 2.0;
}

/// Rotates z back by the basis phase and projects on the decision axis.
inline double y00_decision_statistic(Complex z, std::uint64_t chunk, int m_bases) {
  const Complex r = z * std::polar(1.0, -basis_phase(chunk, m_bases));
  return (r * std::conj(detail::y00_decision_axis(m_bases))).real();
}

/// Bit from a (noisy or exact) amplitude estimate; ties decide 0.
inline int decrypt_slot(Complex z, std::uint64_t chunk, int osk_bit, const Y00Config& cfg) {
  detail::require(chunk < static_cast<std::uint64_t>(cfg.m_bases), "decrypt_slot: chunk outside [0, M)");
  const int eff = y00_decision_statistic(z, chunk, cfg.m_bases) < 0.0 ? 1 : 0;
  return eff ^ osk_bit;
}

/// Noiseless analytic decryption of a known transmitted index.
inline int decrypt_exact(int phase_index, std::uint64_t chunk, int osk_bit, const Y00Config& cfg) {
  detail::require(phase_index >= 0 && phase_index < cfg.points(), "decrypt_exact: phase index out of range");
  return decrypt_slot(std::polar(1.0, index_phase(phase_index, cfg.m_bases)), chunk, osk_bit, cfg);
}

enum class BobReceiver { exact, homodyne, heterodyne };

inline std::string to_string(BobReceiver r) {
  switch (r) {
    case BobReceiver::exact: return "exact";
    case BobReceiver::homodyne: return "homodyne";
    case BobReceiver::heterodyne: return "heterodyne";
  }
  return "?";
}

/// Bob's per-slot bit error with the correct key.
inline double bob_analytic_ber(const Y00Config& cfg, BobReceiver rx, double transmittance = 1.0) {
  cfg.validate();
  detail::require(transmittance >= 0.0 && transmittance <= 1.0, "bob_analytic_ber: transmittance outside [0, 1]");
  const double h = cfg.amp * std::sqrt(transmittance) * y00_half_gap(cfg.m_bases);
  switch (rx) {
    case BobReceiver::exact: return cfg.amp * transmittance > 0.0 ? 0.0 : 0.5;
    case BobReceiver::homodyne: return gaussian_tail(h / kHomodyneSigma);
    case BobReceiver::heterodyne: return gaussian_tail(h / kHeterodyneSigma);
  }
  return 0.5;
}

/// Quantum limit for Bob: Helstrom error between the two points of one basis.
inline double bob_helstrom_ber(const Y00Config& cfg, double transmittance = 1.0) {
  const double a = cfg.amp * std::sqrt(transmittance);
  return helstrom_binary_pure(std::polar(a, 0.0), std::polar(a, index_phase(partner_offset(cfg.m_bases), cfg.m_bases)));
}

/// Helstrom error between neighbouring points θ and θ + π/M.
inline double eve_adjacent_pair_error(const Y00Config& cfg) {
  cfg.validate();
  return helstrom_binary_pure(Amplitude{cfg.amp, 0.0}, std::polar(cfg.amp, std::numbers::pi / cfg.m_bases));
}

/// Constellation indices whose transmitted state may carry data value `bit`.
inline std::vector<int> y00_data_indices(const Y00Config& cfg, int bit) {
  std::vector<int> out;
  for (int p = 0; p < cfg.points(); ++p)
    if (cfg.osk || (p & 1) == bit) out.push_back(p);
  return out;
}

struct Y00Mixtures {
  FockDensityMatrix rho0;
  FockDensityMatrix rho1;
};

/// Eve's data-conditioned states, each an equal mixture over the key-selected points.
inline Y00Mixtures y00_eve_mixtures(const Y00Config& cfg, int n_max = 0) {
  cfg.validate();
  if (n_max <= 0) n_max = fock_truncation(cfg.mean_photons());
  const auto c = y00_constellation(cfg);
  const auto i0 = y00_data_indices(cfg, 0);
  const auto i1 = y00_data_indices(cfg, 1);
  return {psk_mixture_density(c, i0, n_max), psk_mixture_density(c, i1, n_max)};
}

/// Optimal (Helstrom) bit error on the mixtures at equal priors.
inline double eve_binary_mixed_error(const Y00Config& cfg, int n_max = 0) {
  const auto m = y00_eve_mixtures(cfg, n_max);
  return helstrom_binary_mixed(m.rho0, m.rho1);
}

enum class EveTap { heterodyne, srm, helstrom_mixed, exact };

inline std::string to_string(EveTap t) {
  switch (t) {
    case EveTap::heterodyne: return "heterodyne";
    case EveTap::srm: return "srm";
    case EveTap::helstrom_mixed: return "helstrom-mixed";
    case EveTap::exact: return "exact";
  }
  return "?";
}

/// Eve's discrete measurement channel P(y | transmitted index).
///
/// heterodyne: `phase_bins` uniform phase bins; srm: square-root measurement
/// on the 2M states, P(y|p) = |(G^{1/2})_{yp}|²; helstrom-mixed: the binary
/// data measurement {Π₀, 1 − Π₀} of the mixtures; exact: noiseless readout.
inline std::vector<std::vector<double>> eve_outcome_table(const Y00Config& cfg, EveTap tap, int phase_bins = 64,
                                                          int n_max = 0) {
  cfg.validate();
  const int n = cfg.points();
  std::vector<std::vector<double>> t(static_cast<std::size_t>(n));
  switch (tap) {
    case EveTap::exact:
      for (int p = 0; p < n; ++p) {
        t[static_cast<std::size_t>(p)].assign(static_cast<std::size_t>(n), 0.0);
        t[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)] = 1.0;
      }
      break;
    case EveTap::heterodyne:
      for (int p = 0; p < n; ++p)
        t[static_cast<std::size_t>(p)] = heterodyne_phase_bin_probabilities(constellation_point(cfg, p), phase_bins);
      break;
    case EveTap::srm: {
      const CMatrix g = gram_matrix(y00_constellation(cfg).states());
      Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
      const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      const CMatrix g_half = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
      for (int p = 0; p < n; ++p) {
        auto& row = t[static_cast<std::size_t>(p)];
        row.resize(static_cast<std::size_t>(n));
        double s = 0.0;
        for (int y = 0; y < n; ++y) s += row[static_cast<std::size_t>(y)] = std::norm(g_half(y, p));
        for (auto& v : row) v /= s;
      }
      break;
    }
    case EveTap::helstrom_mixed: {
      if (n_max <= 0) n_max = fock_truncation(cfg.mean_photons());
      const auto m = y00_eve_mixtures(cfg, n_max);
      const CMatrix pi0 = helstrom_projector(m.rho0, m.rho1);
      for (int p = 0; p < n; ++p) {
        CVector v = fock_coefficients(constellation_point(cfg, p), n_max);
        v /= v.norm();
        const double p0 = std::clamp((v.adjoint() * pi0 * v)(0, 0).real(), 0.0, 1.0);
        t[static_cast<std::size_t>(p)] = {p0, 1.0 - p0};
      }
      break;
    }
  }
  return t;
}

/// Eve's data guess from a measurement outcome.
inline int eve_bit_from_outcome(EveTap tap, int outcome, int points, int phase_bins) {
  switch (tap) {
    case EveTap::heterodyne: {
      const double centre = -std::numbers::pi + 2.0 * std::numbers::pi * (outcome + 0.5) / phase_bins;
      return nearest_phase_index(std::polar(1.0, centre), points) & 1;
    }
    case EveTap::srm:
    case EveTap::exact: return outcome & 1;
    case EveTap::helstrom_mixed: return outcome;
  }
  return 0;
}

struct Y00LinkOptions {
  BobReceiver bob = BobReceiver::exact;
  double bob_transmittance = 1.0;
  std::optional<SecretKey> bob_key;  // defaults to the sender's key
  EveTap eve = EveTap::heterodyne;
  int phase_bins = 64;
  int n_max = 0;
  bool keep_trace = false;
};

struct Y00SlotRecord {
  std::uint64_t chunk;
  int osk_bit;
  int bit;
  int phase_index;
  int bob_bit;
  int eve_outcome;
  int eve_bit;
};

struct Y00LinkReport {
  std::size_t slots = 0;
  std::size_t bob_errors = 0;
  double bob_ber = 0.0;
  std::optional<std::size_t> eve_symbol_errors;
  std::optional<double> eve_symbol_error;
  std::size_t eve_bit_errors = 0;
  double eve_bit_error = 0.0;
  LiftingConditions lifting;
  std::vector<Y00SlotRecord> trace;
};

/// keystream → encrypt → Bob decrypt / Eve measure, one slot per plaintext bit.
///
/// Eve's heterodyne symbol decision is the nearest of the 2M points; her phase
/// bin is the outcome recorded for H(Y^E|K,X). Contexts for the lifting check
/// are the per-slot (running key, data) pairs.
template <class Rng>
Y00LinkReport simulate_y00_link(std::span<const std::uint8_t> bits, const SecretKey& key, const Y00Config& cfg,
                                const Y00LinkOptions& opt, Rng& rng) {
  cfg.validate();
  detail::require(opt.bob_transmittance >= 0.0 && opt.bob_transmittance <= 1.0,
                  "simulate_y00_link: transmittance outside [0, 1]");
  detail::require(opt.phase_bins >= 2, "simulate_y00_link: phase_bins must be >= 2");
  auto alice = make_running_key_stream(cfg.lfsr, key);
  auto bob = make_running_key_stream(cfg.lfsr, opt.bob_key.value_or(key));

  std::vector<std::vector<double>> table;
  if (opt.eve == EveTap::srm || opt.eve == EveTap::helstrom_mixed)
    table = eve_outcome_table(cfg, opt.eve, opt.phase_bins, opt.n_max);

  const int points = cfg.points();
  const double bob_scale = std::sqrt(opt.bob_transmittance);
  const bool symbols = opt.eve != EveTap::helstrom_mixed;
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Y00LinkReport rep;
  rep.slots = bits.size();
  std::vector<KeyedRecord> keyed;
  keyed.reserve(bits.size());
  std::size_t sym_err = 0;
  if (opt.keep_trace) rep.trace.reserve(bits.size());

  for (std::uint8_t raw : bits) {
    const int bit = raw & 1;
    const auto chunk = alice.next_running_key(cfg.m_bases);
    const int osk = alice.osk_bit(cfg.osk);
    const auto b_chunk = bob.next_running_key(cfg.m_bases);
    const int b_osk = bob.osk_bit(cfg.osk);
    const CipherSlot slot = encrypt_slot(bit, chunk, osk, cfg);

    int bob_bit = 0;
    const Amplitude rx = slot.amplitude * bob_scale;
    switch (opt.bob) {
      case BobReceiver::exact: bob_bit = decrypt_slot(rx, b_chunk, b_osk, cfg); break;
      case BobReceiver::homodyne: {
        const Complex axis = detail::y00_decision_axis(cfg.m_bases) * std::polar(1.0, basis_phase(b_chunk, cfg.m_bases));
        const double x = homodyne_sample(rx, std::arg(axis), rng, kHomodyneSigma);
        bob_bit = (x < 0.0 ? 1 : 0) ^ b_osk;
        break;
      }
      case BobReceiver::heterodyne:
        bob_bit = decrypt_slot(heterodyne_sample(rx, rng).z, b_chunk, b_osk, cfg);
        break;
    }

    int outcome = 0;
    int eve_bit = 0;
    int eve_symbol = -1;
    switch (opt.eve) {
      case EveTap::heterodyne: {
        const auto s = heterodyne_sample(slot.amplitude, rng);
        outcome = phase_bin(s.z, opt.phase_bins);
        eve_symbol = nearest_phase_index(s.z, points);
        eve_bit = eve_symbol & 1;
        break;
      }
      case EveTap::exact:
        outcome = eve_symbol = slot.phase_index;
        eve_bit = outcome & 1;
        break;
      case EveTap::srm:
      case EveTap::helstrom_mixed: {
        const auto& row = table[static_cast<std::size_t>(slot.phase_index)];
        double u = unif(rng);
        outcome = static_cast<int>(row.size()) - 1;
        for (std::size_t y = 0; y < row.size(); ++y) {
          if (u < row[y]) {
            outcome = static_cast<int>(y);
            break;
          }
          u -= row[y];
        }
        eve_bit = eve_bit_from_outcome(opt.eve, outcome, points, opt.phase_bins);
        if (opt.eve == EveTap::srm) eve_symbol = outcome;
        break;
      }
    }

    rep.bob_errors += static_cast<std::size_t>(bob_bit != bit);
    rep.eve_bit_errors += static_cast<std::size_t>(eve_bit != bit);
    if (symbols) sym_err += static_cast<std::size_t>(eve_symbol != slot.phase_index);
    keyed.push_back({(chunk * 2 + static_cast<std::uint64_t>(osk)) * 2 + static_cast<std::uint64_t>(bit), bob_bit, outcome});
    if (opt.keep_trace) rep.trace.push_back({chunk, osk, bit, slot.phase_index, bob_bit, outcome, eve_bit});
  }

  if (rep.slots > 0) {
    const auto n = static_cast<double>(rep.slots);
    rep.bob_ber = static_cast<double>(rep.bob_errors) / n;
    rep.eve_bit_error = static_cast<double>(rep.eve_bit_errors) / n;
    if (symbols) {
      rep.eve_symbol_errors = sym_err;
      rep.eve_symbol_error = static_cast<double>(sym_err) / n;
    }
    rep.lifting = lifting_conditions_check(keyed);
  }
  return rep;
}

/// Key-enumeration model of a Y-00 link for the exhaustive key posterior.
///
/// Keys are the integers 0..2^key_bits − 1 installed big-endian; key_bits must
/// be shorter than the register so that every key seeds a nonzero state.
class Y00KeyModel {
 public:
  Y00KeyModel(Y00Config cfg, int key_bits, EveTap tap, int phase_bins = 64, int n_max = 0)
      : cfg_(std::move(cfg)), key_bits_(key_bits) {
    cfg_.validate();
    detail::require(key_bits >= 1 && key_bits <= 20, "Y00KeyModel: key_bits must be in [1, 20]");
    detail::require(key_bits < cfg_.lfsr.register_length, "Y00KeyModel: key_bits must be below the register length");
    table_ = eve_outcome_table(cfg_, tap, phase_bins, n_max);
    reset();
  }

  std::size_t key_count() const noexcept { return std::size_t{1} << key_bits_; }
  std::size_t outcome_count() const noexcept { return table_.front().size(); }
  SecretKey key(std::size_t k) const { return SecretKey::from_integer(k, key_bits_); }
  const Y00Config& config() const noexcept { return cfg_; }

  void reset() {
    streams_.clear();
    streams_.reserve(key_count());
    for (std::size_t k = 0; k < key_count(); ++k) streams_.push_back(make_running_key_stream(cfg_.lfsr, key(k)));
    states_.assign(key_count() * 2, 0);
  }

  void advance() {
    for (std::size_t k = 0; k < streams_.size(); ++k) {
      const auto chunk = streams_[k].next_running_key(cfg_.m_bases);
      const int osk = streams_[k].osk_bit(cfg_.osk);
      states_[2 * k] = encrypt_slot(0, chunk, osk, cfg_).phase_index;
      states_[2 * k + 1] = encrypt_slot(1, chunk, osk, cfg_).phase_index;
    }
  }

  int state(std::size_t k, int x) const { return states_[2 * k + static_cast<std::size_t>(x)]; }
  double outcome_probability(int s, int y) const {
    return table_[static_cast<std::size_t>(s)][static_cast<std::size_t>(y)];
  }

 private:
  Y00Config cfg_;
  int key_bits_;
  std::vector<std::vector<double>> table_;
  std::vector<RunningKeyStream> streams_;
  std::vector<int> states_;
};

}  // namespace qcipher
