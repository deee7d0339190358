// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

// Fast invariant suite behind `qcipher selftest`. Every check is seeded and
// its CSV row is reproducible byte for byte.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qcipher/block_cipher.hpp"
#include "qcipher/experiment/csv.hpp"
#include "qcipher/measurements.hpp"
#include "qcipher/security_metrics.hpp"
#include "qcipher/stream_cipher.hpp"
#include "qcipher/symplectic.hpp"

namespace qcipher::experiment {

struct SelfCheck {
  std::string name;
  double value;
  double threshold;
  bool upper;  // pass iff value <= threshold (else value >= threshold)

  bool pass() const { return std::isfinite(value) && (upper ? value <= threshold : value >= threshold); }
};

struct SelftestResult {
  std::vector<SelfCheck> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const SelfCheck& c) { return c.pass(); });
  }

  std::string csv() const {
    CsvWriter w({"check", "value", "threshold", "pass"});
    for (const auto& c : checks) w.row({c.name, fmt(c.value), fmt(c.threshold), c.pass() ? "1" : "0"});
    return w.str();
  }
};

inline SelftestResult run_selftest(std::uint64_t seed) {
  SelftestResult r;
  auto add = [&](std::string name, double value, double threshold, bool upper) {
    r.checks.push_back({std::move(name), value, threshold, upper});
  };

  double srm_gap = 0.0;
  for (int j : {2, 4, 8, 16})
    for (double n : {0.5, 1.0, 2.0, 4.0}) {
      const auto states = PskConstellation(j, std::sqrt(n)).states();
      srm_gap = std::max(srm_gap, std::abs(srm_symmetric_psk(j, std::sqrt(n)).error - srm_general(states).error));
    }
  add("srm_symmetric_vs_gram_root", srm_gap, 1e-9, true);

  double bin_gap = 0.0;
  for (double n : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double a = std::sqrt(n);
    bin_gap = std::max(bin_gap, std::abs(srm_symmetric_psk(2, a).error - helstrom_binary_pure(a, -a)));
  }
  add("binary_srm_equals_helstrom", bin_gap, 1e-12, true);

  double prev = 0.0, worst_step = 0.0, mixed32 = 0.0;
  for (int m : {2, 4, 8, 16, 32}) {
    Y00Config cfg;
    cfg.m_bases = m;
    cfg.amp = 1.0;
    const double e = eve_binary_mixed_error(cfg, 40);
    worst_step = std::min(worst_step, e - prev);
    prev = e;
    mixed32 = e;
  }
  add("eve_mixed_error_m32", mixed32, 0.49, false);
  add("eve_mixed_error_monotone_min_step", worst_step, -1e-12, false);

  {
    Y00Config cfg;
    cfg.m_bases = 8;
    cfg.amp = 1.0;
    cfg.osk = true;
    const auto mix = y00_eve_mixtures(cfg, 40);
    add("osk_trace_distance", trace_distance(mix.rho0, mix.rho1), 1e-10, true);
    add("osk_eve_error_gap", std::abs(eve_binary_mixed_error(cfg, 40) - 0.5), 0.0, true);
  }

  add("cppm_closed_form_gap", std::abs(bob_cppm_error(4, std::sqrt(2.0)) - 0.75 * std::exp(-2.0)), 1e-12, true);
  add("cppm_bound_m2p20_s4", eve_cppm_bound(std::int64_t{1} << 20, 4.0).bound, 0.99, false);

  {
    FppmConfig cfg;
    cfg.m_modes = 8;
    cfg.amp = 2.0;
    cfg.j_phases = 256;
    add("fppm_srm_error_j256", eve_fppm_srm_error(cfg), 0.99, false);
    add("fppm_heterodyne_error_j256", eve_fppm_heterodyne_error(cfg), 0.99, false);
  }

  {
    const auto calc = locking_calc(0.1, 1e6);
    add("locking_key_entropy_gap", std::abs(calc.h_k - 4.0 * std::log2(10.0)), 1e-12, true);
    add("locking_eta", calc.eta_max, 1.48e-5, true);
  }

  {
    double resid = 0.0, energy = 0.0;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (std::uint64_t i = 0; i < 8; ++i) {
      const auto u = haar_unitary(8, seed, i);
      std::vector<Amplitude> a(8);
      for (auto& v : a) v = {g(rng), g(rng)};
      const CoherentVector in(a);
      const auto out = apply_transform(u, in);
      const auto back = apply_transform(inverse_transform(u), out);
      for (std::size_t k = 0; k < a.size(); ++k) resid = std::max(resid, std::abs(back[k] - in[k]));
      energy = std::max(energy, std::abs(out.energy() - in.energy()) / in.energy());
    }
    add("unitary_round_trip_residual", resid, 1e-12, true);
    add("unitary_energy_defect", energy, 1e-10, true);
  }

  {
    const CMatrix basis = CMatrix::Identity(2, 2);
    std::vector<CMatrix> rho{basis.col(0) * basis.col(0).adjoint(), basis.col(1) * basis.col(1).adjoint()};
    const std::vector<double> pri{0.5, 0.5};
    add("holevo_residual_orthogonal", holevo_optimality_residual(rho, pri, Povm::projective(basis)), 1e-10, true);
  }

  {
    Y00Config cfg;
    cfg.m_bases = 16;
    cfg.amp = std::sqrt(20.0);
    Y00LinkOptions opt;
    opt.bob = BobReceiver::homodyne;
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> bits(20000);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
    const auto key = SecretKey::from_hex("a5c3");
    add("y00_round_trip_errors", static_cast<double>(simulate_y00_link(bits, key, cfg, opt, rng).bob_errors), 0.0, true);
    opt.bob_key = SecretKey::from_hex("5a3c");
    const double wrong = simulate_y00_link(bits, key, cfg, opt, rng).bob_ber;
    add("y00_wrong_key_ber_offset", std::abs(wrong - 0.5), 0.02, true);
  }

  add("lfsr_standard16_maximal", is_maximal_length(16, {16, 15, 13, 4}) ? 1.0 : 0.0, 1.0, false);
  return r;
}

}  // namespace qcipher::experiment
