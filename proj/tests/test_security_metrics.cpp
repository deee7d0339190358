// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qcipher/measurements.hpp"
#include "qcipher/security_metrics.hpp"

namespace qcipher {
namespace {

TEST(Entropy, BasicValues) {
  EXPECT_NEAR(entropy(DiscreteDistribution::uniform(4)), 2.0, 1e-15);
  EXPECT_EQ(entropy(DiscreteDistribution({1.0, 0.0})), 0.0);
  // −¼log₂¼ − ¾log₂¾ = 2 − ¾log₂3.
  EXPECT_NEAR(entropy(DiscreteDistribution({0.25, 0.75})), 2.0 - 0.75 * std::log2(3.0), 1e-15);
  EXPECT_NEAR(entropy(DiscreteDistribution({0.25, 0.75})), 0.811278, 1e-6);
  EXPECT_THROW(DiscreteDistribution({0.5, 0.6}), ValidationError);
  EXPECT_THROW(DiscreteDistribution({1.2, -0.2}), ValidationError);
}

TEST(Channel, ConditionalEntropyAndMutualInformation) {
  const auto u2 = DiscreteDistribution::uniform(2);
  const auto bsc = DiscreteChannel::binary_symmetric(0.1);
  EXPECT_NEAR(conditional_entropy(bsc, u2), oracle::binary_entropy(0.1), 1e-12);
  EXPECT_NEAR(conditional_entropy(bsc, u2), 0.468996, 1e-6);
  EXPECT_NEAR(mutual_information(bsc, u2), 1.0 - oracle::binary_entropy(0.1), 1e-12);
  EXPECT_NEAR(mutual_information(bsc, u2), 0.531004, 1e-6);

  for (std::size_t k : {2u, 4u, 16u}) {
    const auto u = DiscreteDistribution::uniform(k);
    EXPECT_NEAR(mutual_information(DiscreteChannel::noiseless(k), u), std::log2(static_cast<double>(k)), 1e-12);
    EXPECT_NEAR(conditional_entropy(DiscreteChannel::noiseless(k), u), 0.0, 1e-15);
  }
  const DiscreteChannel flat({{0.2, 0.8}, {0.2, 0.8}});
  const DiscreteDistribution px({0.3, 0.7});
  EXPECT_NEAR(mutual_information(flat, px), 0.0, 1e-15);
  EXPECT_NEAR(conditional_entropy(flat, px), entropy(px), 1e-15);
  EXPECT_THROW(DiscreteChannel({{0.5, 0.6}}), ValidationError);
  EXPECT_THROW(conditional_entropy(bsc, DiscreteDistribution::uniform(3)), ValidationError);
}

TEST(Channel, ChainRuleAgainstJointTable) {
  const DiscreteChannel ch({{0.7, 0.2, 0.1}, {0.1, 0.6, 0.3}, {0.25, 0.25, 0.5}});
  const DiscreteDistribution px({0.2, 0.5, 0.3});
  double hxy = 0.0, hy = 0.0;
  std::vector<double> py(3, 0.0);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y) {
      const double j = px[x] * ch(x, y);
      hxy -= j * std::log2(j);
      py[y] += j;
    }
  for (double v : py) hy -= v * std::log2(v);
  EXPECT_NEAR(conditional_entropy(ch, px), hxy - hy, 1e-12);
  EXPECT_NEAR(mutual_information(ch, px), entropy(px) + hy - hxy, 1e-12);
  EXPECT_NEAR(output_conditional_entropy(ch, px), hxy - entropy(px), 1e-12);
}

TEST(ShannonBound, Verdicts) {
  EXPECT_EQ(shannon_bound_check(16.0, 16.0), ShannonVerdict::bounded);
  EXPECT_EQ(shannon_bound_check(64.0, 16.0), ShannonVerdict::lifted);
  EXPECT_EQ(shannon_bound_check(8.0, 16.0), ShannonVerdict::bounded);
  EXPECT_EQ(to_string(ShannonVerdict::lifted), "lifted");
  EXPECT_THROW(shannon_bound_check(-1.0, 1.0), ValidationError);
}

TEST(Lifting, DeterministicBobAndNoisyEve) {
  std::mt19937_64 rng(1);
  std::vector<KeyedRecord> t;
  for (int i = 0; i < 100; ++i) {
    const int b = static_cast<int>(rng() & 1U);
    t.push_back({static_cast<std::uint64_t>(b), b, static_cast<std::int64_t>(rng() % 4)});
  }
  const auto lc = lifting_conditions_check(t);
  EXPECT_TRUE(lc.bob_determined);
  EXPECT_TRUE(lc.eve_randomized);
  EXPECT_EQ(lc.h_bob_given_kx, 0.0);

  for (auto& r : t) r.eve_outcome = static_cast<std::int64_t>(r.context);
  const auto lc2 = lifting_conditions_check(t);
  EXPECT_FALSE(lc2.eve_randomized);
  EXPECT_THROW(lifting_conditions_check(std::vector<KeyedRecord>{{0, 0, 0}, {1, 1, 1}}), ValidationError);
}

TEST(Lifting, RepeatedContextHeterodyneEntropy) {
  std::mt19937_64 rng(2);
  std::vector<KeyedRecord> t;
  for (int i = 0; i < 100; ++i) t.push_back({7, 0, phase_bin(heterodyne_sample({1.0, 0.0}, rng).z, 64)});
  EXPECT_GT(lifting_conditions_check(t).h_eve_given_kx, 3.0);
}

TEST(Unicity, LowerBound) {
  EXPECT_NEAR(unicity_lower_bound(256.0, 1.0), 256.0, 1e-15);
  EXPECT_TRUE(std::isinf(unicity_lower_bound(16.0, 0.0)));
  EXPECT_THROW(unicity_lower_bound(16.0, -1.0), ValidationError);
}

TEST(Locking, EtaAndKeyEntropy) {
  EXPECT_EQ(locking_eta(5.0, 5.0), 1.0);
  const auto c = locking_calc(0.1, 1e6);
  EXPECT_NEAR(c.h_k, 4.0 * std::log2(10.0), 1e-12);
  EXPECT_NEAR(c.h_k, 13.288, 1e-3);
  EXPECT_NEAR(c.h_x_given_y_min, 9e5, 1e-6);
  EXPECT_LE(c.eta_max, 1.48e-5);
  EXPECT_NEAR(locking_key_entropy(0.1, LogBase::natural), 4.0 * std::log(10.0), 1e-12);
  EXPECT_THROW(locking_key_entropy(0.0), ValidationError);
  EXPECT_THROW(locking_eta(1.0, 0.0), ValidationError);
}

TEST(Locking, EtaScalesAsLogNOverN) {
  double prev = std::numeric_limits<double>::infinity();
  for (double n = 1e2; n <= 1e8; n *= 10) {
    const double eta = locking_eta_scaling(n);
    EXPECT_LT(eta, prev);
    prev = eta;
    EXPECT_NEAR(eta * n / std::log2(n), 4.0 / (1.0 - 1.0 / n), 1e-9);
  }
}

TEST(VariationalDistance, Values) {
  const DiscreteDistribution p({0.5, 0.5});
  EXPECT_EQ(variational_distance(p, p), 0.0);
  EXPECT_NEAR(variational_distance(p, DiscreteDistribution({0.6, 0.4})), 0.2, 1e-15);
  EXPECT_NEAR(variational_distance(DiscreteDistribution({1.0, 0.0}), DiscreteDistribution({0.0, 1.0})), 2.0, 1e-15);
  EXPECT_THROW(variational_distance(p, DiscreteDistribution::uniform(3)), ValidationError);
}

}  // namespace
}  // namespace qcipher
