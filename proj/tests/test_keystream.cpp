// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "qcipher/keystream.hpp"

namespace qcipher {
namespace {

TEST(SecretKey, HexRoundTripAndBitOrder) {
  const auto k = SecretKey::from_hex("a5C3");
  EXPECT_EQ(k.size(), 16u);
  EXPECT_EQ(k.to_hex(), "a5c3");
  const std::vector<std::uint8_t> expect{1, 0, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1, 1};
  EXPECT_EQ(k.bits(), expect);
  EXPECT_EQ(SecretKey::from_integer(0xa5c3, 16), k);
  EXPECT_THROW(SecretKey::from_hex("12g4"), ValidationError);
  EXPECT_THROW(SecretKey::from_hex(""), ValidationError);
}

TEST(Lfsr, MatchesBitListOracle) {
  const std::vector<int> taps{16, 15, 13, 4};
  const std::uint64_t seed = 0xace1;
  Lfsr l(16, taps, seed);
  oracle::ListLfsr ref{{}, taps};
  for (int i = 0; i < 16; ++i) ref.s.push_back(static_cast<int>((seed >> i) & 1U));
  for (int i = 0; i < 5000; ++i) ASSERT_EQ(l.next_bit(), ref.step()) << i;
}

TEST(Lfsr, StandardPolynomialsAreMaximal) {
  const auto spec = LfsrSpec::standard16();
  EXPECT_TRUE(is_maximal_length(16, spec.taps));
  for (const auto& t : spec.alternate_taps) EXPECT_TRUE(is_maximal_length(16, t));
  EXPECT_TRUE(is_maximal_length(24, {24, 23, 22, 17}));
  EXPECT_FALSE(is_maximal_length(16, {16, 8}));
  EXPECT_EQ(lfsr_period(4, {4, 3}), 15u);
}

TEST(Lfsr, RejectsZeroSeedAndBadTaps) {
  EXPECT_THROW(Lfsr(16, {16, 15, 13, 4}, 0), ValidationError);
  EXPECT_THROW(Lfsr(8, {9}, 1), ValidationError);
  EXPECT_THROW(Lfsr(8, {8}, 0x1ff), ValidationError);
  EXPECT_THROW(make_running_key_stream(LfsrSpec::standard16(), SecretKey::from_hex("0000")), ValidationError);
}

TEST(InstallKey, ShortKeyIsPaddedWithSingleOne) {
  const LfsrSpec spec{24, {24, 23, 22, 17}, {}};
  const auto l = install_key(spec, SecretKey::from_integer(0, 8));
  EXPECT_EQ(l.seed(), std::uint64_t{1} << 8);
  const auto l2 = install_key(spec, SecretKey::from_integer(0x80, 8));
  EXPECT_EQ(l2.seed(), 0x101u);
}

TEST(InstallKey, DistinctShortKeysGiveDistinctStreams) {
  const LfsrSpec spec{24, {24, 23, 22, 17}, {}};
  std::set<std::vector<int>> seen;
  for (std::uint64_t k = 0; k < 256; ++k) {
    auto s = make_running_key_stream(spec, SecretKey::from_integer(k, 8));
    std::vector<int> bits;
    for (int i = 0; i < 40; ++i) bits.push_back(s.next_bit());
    seen.insert(bits);
  }
  EXPECT_EQ(seen.size(), 256u);
}

TEST(InstallKey, ExtraKeyBitsSelectTapSet) {
  const auto spec = LfsrSpec::standard16();
  const auto base = SecretKey::from_hex("beef");
  auto with_extra = [&](int extra) {
    auto bits = base.bits();
    bits.push_back(static_cast<std::uint8_t>((extra >> 1) & 1));
    bits.push_back(static_cast<std::uint8_t>(extra & 1));
    return SecretKey(bits);
  };
  auto first_bits = [&](const SecretKey& k) {
    auto l = install_key(spec, k);
    std::vector<int> v;
    for (int i = 0; i < 64; ++i) v.push_back(l.next_bit());
    return v;
  };
  EXPECT_EQ(first_bits(with_extra(0)), first_bits(base));
  std::set<std::vector<int>> seen;
  for (int e = 0; e < 4; ++e) seen.insert(first_bits(with_extra(e)));
  EXPECT_EQ(seen.size(), 4u);
}

TEST(ChunkedStream, ChunksAreBigEndianAndOskFollows) {
  const auto spec = LfsrSpec::standard16();
  const auto key = SecretKey::from_hex("1d2f");
  auto raw = install_key(spec, key);
  auto stream = make_running_key_stream(spec, key);
  for (int slot = 0; slot < 200; ++slot) {
    std::uint64_t expect = 0;
    for (int i = 0; i < 5; ++i) expect = (expect << 1) | static_cast<std::uint64_t>(raw.next_bit());
    const int osk = raw.next_bit();
    ASSERT_EQ(stream.next_running_key(32), expect);
    ASSERT_EQ(stream.osk_bit(true), osk);
  }
  EXPECT_EQ(stream.bits_consumed(), 1200u);
  EXPECT_EQ(stream.osk_bit(false), 0);
  EXPECT_EQ(stream.bits_consumed(), 1200u);
  EXPECT_EQ(stream.next_running_key(1), 0u);
  EXPECT_THROW(stream.next_running_key(6), ValidationError);
}

TEST(ChunkedStream, ChunksAreRoughlyUniform) {
  auto s = make_running_key_stream(LfsrSpec::standard16(), SecretKey::from_hex("7a11"));
  std::vector<int> counts(16);
  const int n = 16000;
  for (int i = 0; i < n; ++i) ++counts[s.next_running_key(16)];
  for (int c : counts) EXPECT_NEAR(c, n / 16, 5 * std::sqrt(n / 16.0));
}

TEST(TrueRandomKey, ReproducibleModeIsDeterministic) {
  const auto a = true_random_key(128, EntropySource::reproducible(5));
  const auto b = true_random_key(128, EntropySource::reproducible(5));
  const auto c = true_random_key(128, EntropySource::reproducible(6));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(true_random_key(70, EntropySource::host()).size(), 70u);
  EXPECT_THROW(true_random_key(0, EntropySource::host()), ValidationError);
}

TEST(PowerOfTwo, Helpers) {
  EXPECT_TRUE(is_power_of_two(1));
  EXPECT_TRUE(is_power_of_two(1024));
  EXPECT_FALSE(is_power_of_two(0));
  EXPECT_FALSE(is_power_of_two(3));
  EXPECT_EQ(log2_exact(64), 6);
  EXPECT_THROW(log2_exact(48), ValidationError);
}

}  // namespace
}  // namespace qcipher
