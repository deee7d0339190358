// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qcipher/stream_cipher.hpp"

namespace qcipher {
namespace {

Y00Config make_cfg(int m, double amp2, bool osk = false) {
  Y00Config c;
  c.m_bases = m;
  c.amp = std::sqrt(amp2);
  c.osk = osk;
  return c;
}

std::vector<std::uint8_t> random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> b(n);
  for (auto& v : b) v = static_cast<std::uint8_t>(rng() & 1U);
  return b;
}

/// ½ − ½‖½ρ₀ − ½ρ₁‖₁ with the mixtures built from dense Fock vectors.
double mixed_error_oracle(const Y00Config& cfg, int n_max) {
  std::vector<oracle::C> p0, p1;
  for (int p = 0; p < cfg.points(); ++p) {
    const auto a = std::polar(cfg.amp, std::numbers::pi * p / cfg.m_bases);
    if (cfg.osk || (p & 1) == 0) p0.push_back(a);
    if (cfg.osk || (p & 1) == 1) p1.push_back(a);
  }
  return 0.5 - oracle::trace_norm_half(0.5 * (oracle::mixture(p0, n_max) - oracle::mixture(p1, n_max)));
}

TEST(Encrypt, NeighbouringPointsAlternateInDataValue) {
  for (int m : {1, 2, 4, 16}) {
    const auto cfg = make_cfg(m, 1.0);
    std::vector<int> bit_of(static_cast<std::size_t>(cfg.points()), -1);
    for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(m); ++c)
      for (int b : {0, 1}) {
        const auto s = encrypt_slot(b, c, 0, cfg);
        ASSERT_EQ(s.phase_index & 1, b);
        bit_of[static_cast<std::size_t>(s.phase_index)] = b;
      }
    for (int p = 0; p < cfg.points(); ++p) {
      if (bit_of[static_cast<std::size_t>(p)] < 0) continue;
      const int q = (p + 1) % cfg.points();
      if (bit_of[static_cast<std::size_t>(q)] >= 0) EXPECT_NE(bit_of[static_cast<std::size_t>(p)], bit_of[static_cast<std::size_t>(q)]);
    }
  }
}

TEST(Encrypt, EveryPointIsUsedOnce) {
  const auto cfg = make_cfg(8, 1.0);
  std::vector<int> used(16, 0);
  for (std::uint64_t c = 0; c < 8; ++c)
    for (int b : {0, 1}) ++used[static_cast<std::size_t>(encrypt_slot(b, c, 0, cfg).phase_index)];
  for (int u : used) EXPECT_EQ(u, 1);
}

TEST(Encrypt, OskSwapsToBasisPartner) {
  const auto cfg = make_cfg(4, 1.0, true);
  for (std::uint64_t c = 0; c < 4; ++c) {
    EXPECT_EQ(encrypt_slot(0, c, 1, cfg).phase_index, encrypt_slot(1, c, 0, cfg).phase_index);
    EXPECT_EQ(encrypt_slot(1, c, 1, cfg).phase_index, encrypt_slot(0, c, 0, cfg).phase_index);
  }
  const auto bpsk = make_cfg(1, 1.0, true);
  EXPECT_NEAR(std::abs(encrypt_slot(0, 0, 1, bpsk).amplitude + encrypt_slot(0, 0, 0, bpsk).amplitude), 0.0, 1e-15);
}

TEST(Encrypt, RejectsBadInputs) {
  const auto cfg = make_cfg(4, 1.0);
  EXPECT_THROW(encrypt_slot(2, 0, 0, cfg), ValidationError);
  EXPECT_THROW(encrypt_slot(0, 4, 0, cfg), ValidationError);
  EXPECT_THROW(make_cfg(3, 1.0).validate(), ValidationError);
}

TEST(Decrypt, ExactInversionForEverySlot) {
  for (int m : {1, 2, 8, 64}) {
    for (bool osk : {false, true}) {
      const auto cfg = make_cfg(m, 1.0, osk);
      for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(m); ++c)
        for (int o : {0, 1})
          for (int b : {0, 1}) ASSERT_EQ(decrypt_exact(encrypt_slot(b, c, o, cfg).phase_index, c, o, cfg), b);
    }
  }
}

TEST(Decrypt, QuarterTurnWrongBasisGivesCoinFlip) {
  const auto cfg = make_cfg(16, 20.0);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::uint64_t> chunk(0, 15);
  const int n = 100000;
  int err = 0;
  for (int i = 0; i < n; ++i) {
    const int b = static_cast<int>(rng() & 1U);
    const auto c = chunk(rng);
    const auto z = heterodyne_sample(encrypt_slot(b, c, 0, cfg).amplitude, rng).z;
    err += decrypt_slot(z, (c + 4) % 16, 0, cfg) != b;
  }
  EXPECT_NEAR(static_cast<double>(err) / n, 0.5, 0.01);
}

TEST(Link, CorrectKeyHighPowerHasNoErrors) {
  const auto cfg = make_cfg(16, 20.0);
  EXPECT_LT(bob_analytic_ber(cfg, BobReceiver::homodyne), 1e-9);
  std::mt19937_64 rng(9);
  Y00LinkOptions opt;
  opt.bob = BobReceiver::homodyne;
  opt.eve = EveTap::exact;
  const auto bits = random_bits(1000000, 1);
  const auto rep = simulate_y00_link(bits, SecretKey::from_hex("a5c3"), cfg, opt, rng);
  EXPECT_EQ(rep.bob_errors, 0u);
}

TEST(Link, WrongKeyAveragesToHalf) {
  const auto cfg = make_cfg(16, 20.0);
  std::mt19937_64 rng(10);
  Y00LinkOptions opt;
  opt.bob = BobReceiver::homodyne;
  opt.bob_key = SecretKey::from_hex("5a3c");
  const auto rep = simulate_y00_link(random_bits(50000, 2), SecretKey::from_hex("a5c3"), cfg, opt, rng);
  EXPECT_NEAR(rep.bob_ber, 0.5, 0.02);
}

TEST(Link, HomodyneMonteCarloMatchesGaussianTail) {
  const auto cfg = make_cfg(2, 1.0);
  std::mt19937_64 rng(11);
  Y00LinkOptions opt;
  opt.bob = BobReceiver::homodyne;
  const std::size_t n = 200000;
  const auto rep = simulate_y00_link(random_bits(n, 3), SecretKey::from_hex("1234"), cfg, opt, rng);
  const double p = oracle::q_function(cfg.amp * y00_half_gap(2) * std::numbers::sqrt2);
  EXPECT_NEAR(rep.bob_ber, p, 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Link, EveHeterodyneAtHighMIsNearlyBlind) {
  const auto cfg = make_cfg(64, 1.0);
  std::mt19937_64 rng(12);
  Y00LinkOptions opt;
  const auto rep = simulate_y00_link(random_bits(100000, 4), SecretKey::from_hex("b7e1"), cfg, opt, rng);
  EXPECT_EQ(rep.bob_ber, 0.0);
  EXPECT_GE(rep.eve_bit_error, 0.45);
  EXPECT_LE(rep.eve_bit_error, 0.55);
  EXPECT_TRUE(rep.lifting.bob_determined);
  EXPECT_TRUE(rep.lifting.eve_randomized);
}

TEST(Link, DegenerateCipherGivesEveBobsErrorRate) {
  const auto cfg = make_cfg(1, 1.0);
  std::mt19937_64 rng(13);
  Y00LinkOptions opt;
  opt.bob = BobReceiver::heterodyne;
  const std::size_t n = 200000;
  const auto rep = simulate_y00_link(random_bits(n, 5), SecretKey::from_hex("0f0f"), cfg, opt, rng);
  const double p = bob_analytic_ber(cfg, BobReceiver::heterodyne);
  const double tol = 4.0 * std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(rep.bob_ber, p, tol);
  EXPECT_NEAR(rep.eve_bit_error, p, tol);
}

TEST(Link, ExactEveTapFailsLifting) {
  const auto cfg = make_cfg(4, 1.0);
  std::mt19937_64 rng(14);
  Y00LinkOptions opt;
  opt.eve = EveTap::exact;
  const auto rep = simulate_y00_link(random_bits(4000, 6), SecretKey::from_hex("0f0f"), cfg, opt, rng);
  EXPECT_TRUE(rep.lifting.bob_determined);
  EXPECT_FALSE(rep.lifting.eve_randomized);
  EXPECT_EQ(rep.eve_bit_errors, 0u);
}

TEST(EveAdjacent, ReductionAndHighM) {
  const auto c1 = make_cfg(1, 1.0);
  EXPECT_NEAR(eve_adjacent_pair_error(c1), helstrom_binary_pure({1.0, 0.0}, {-1.0, 0.0}), 1e-15);
  const auto c64 = make_cfg(64, 1.0);
  const double s2 = std::exp(-2.0 * (1.0 - std::cos(std::numbers::pi / 64)));
  EXPECT_NEAR(eve_adjacent_pair_error(c64), 0.5 * (1.0 - std::sqrt(1.0 - s2)), 1e-12);
  EXPECT_GE(eve_adjacent_pair_error(c64), 0.45);
}

TEST(EveMixed, MatchesTraceNormOracle) {
  for (int m : {1, 2, 4, 8}) {
    const auto cfg = make_cfg(m, 1.0);
    EXPECT_NEAR(eve_binary_mixed_error(cfg, 40), mixed_error_oracle(cfg, 40), 1e-12) << m;
  }
}

TEST(EveMixed, BracketedAndMonotoneInM) {
  const double m2 = eve_binary_mixed_error(make_cfg(2, 1.0));
  EXPECT_LT(m2, 0.5);
  EXPECT_GT(m2, helstrom_binary_pure({1.0, 0.0}, {-1.0, 0.0}));
  EXPECT_NEAR(eve_binary_mixed_error(make_cfg(1, 1.0)), helstrom_binary_pure({1.0, 0.0}, {-1.0, 0.0}), 1e-12);
  double prev = 0.0;
  for (int m = 2; m <= 32; m *= 2) {
    const double e = eve_binary_mixed_error(make_cfg(m, 1.0));
    EXPECT_GE(e, prev - 1e-12) << m;
    prev = e;
  }
  EXPECT_GE(prev, 0.49);
}

TEST(EveMixed, OskMakesMixturesIdentical) {
  const auto cfg = make_cfg(8, 1.0, true);
  const auto mix = y00_eve_mixtures(cfg);
  EXPECT_LE(trace_distance(mix.rho0, mix.rho1), 1e-10);
  EXPECT_EQ(eve_binary_mixed_error(cfg), 0.5);
}

TEST(EveOutcomeTable, RowsAreDistributions) {
  const auto cfg = make_cfg(4, 1.0);
  for (auto tap : {EveTap::exact, EveTap::heterodyne, EveTap::srm, EveTap::helstrom_mixed}) {
    const auto t = eve_outcome_table(cfg, tap, 32);
    ASSERT_EQ(t.size(), 8u);
    for (const auto& row : t) {
      double s = 0.0;
      for (double v : row) {
        EXPECT_GE(v, 0.0);
        s += v;
      }
      EXPECT_NEAR(s, 1.0, 1e-10) << to_string(tap);
    }
  }
}

TEST(EveOutcomeTable, HelstromTableReproducesMixedError) {
  const auto cfg = make_cfg(4, 1.0);
  const auto t = eve_outcome_table(cfg, EveTap::helstrom_mixed);
  double err = 0.0;
  for (int p = 0; p < cfg.points(); ++p) err += t[static_cast<std::size_t>(p)][static_cast<std::size_t>(1 - (p & 1))];
  EXPECT_NEAR(err / cfg.points(), eve_binary_mixed_error(cfg), 1e-10);
}

TEST(EveOutcomeTable, SrmDiagonalMatchesSrmSuccess) {
  const auto cfg = make_cfg(4, 1.0);
  const auto t = eve_outcome_table(cfg, EveTap::srm);
  double s = 0.0;
  for (int p = 0; p < cfg.points(); ++p) s += t[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)];
  EXPECT_NEAR(1.0 - s / cfg.points(), srm_symmetric_psk(cfg.points(), cfg.amp).error, 1e-10);
}

TEST(KeyModel, StatesFollowTheKeyedStream) {
  Y00Config cfg = make_cfg(4, 1.0);
  cfg.lfsr = LfsrSpec{24, {24, 23, 22, 17}, {}};
  Y00KeyModel model(cfg, 8, EveTap::exact);
  EXPECT_EQ(model.key_count(), 256u);
  EXPECT_EQ(model.outcome_count(), 8u);
  auto s = make_running_key_stream(cfg.lfsr, model.key(77));
  for (int n = 0; n < 50; ++n) {
    model.advance();
    const auto c = s.next_running_key(4);
    for (int x : {0, 1}) ASSERT_EQ(model.state(77, x), encrypt_slot(x, c, 0, cfg).phase_index);
  }
  EXPECT_THROW(Y00KeyModel(cfg, 24, EveTap::exact), ValidationError);
}

}  // namespace
}  // namespace qcipher
