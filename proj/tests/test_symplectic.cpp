// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "qcipher/symplectic.hpp"

namespace qcipher {
namespace {

CoherentVector random_vector(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Amplitude> a(m);
  for (auto& v : a) v = {g(rng), g(rng)};
  return CoherentVector(a);
}

TEST(AmplitudeTransform, UnitaryCheckAndGeneralMatrices) {
  CMatrix m(2, 2);
  m << 1.0, 1.0, 1.0, 1.0;
  EXPECT_THROW(AmplitudeTransform::unitary(m), ValidationError);
  const auto g = AmplitudeTransform::general(m);
  EXPECT_FALSE(g.is_unitary());
  EXPECT_TRUE(std::isinf(g.condition_number()));
  EXPECT_THROW(inverse_transform(g), NumericalError);
  EXPECT_THROW(AmplitudeTransform::general(CMatrix(2, 3)), ValidationError);

  CMatrix d(2, 2);
  d << 2.0, 0.0, 0.0, 0.5;
  const auto inv = inverse_transform(AmplitudeTransform::general(d));
  EXPECT_NEAR(inv.matrix()(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(AmplitudeTransform::general(d).condition_number(), 4.0, 1e-12);
}

TEST(ApplyTransform, IdentityAndDimensionCheck) {
  std::mt19937_64 rng(1);
  const auto v = random_vector(5, rng);
  EXPECT_EQ(apply_transform(AmplitudeTransform::identity(5), v), v);
  EXPECT_THROW(apply_transform(AmplitudeTransform::identity(4), v), ValidationError);
}

TEST(ApplyTransform, DftSpreadsPpmPulseUniformly) {
  const double amp = 2.0;
  std::vector<Amplitude> s(4, Amplitude{});
  s[0] = amp;
  const auto out = apply_transform(dft_transform(4), CoherentVector(s));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(out[i]), amp / 2.0, 1e-14);
}

TEST(ApplyTransform, UnitaryRoundTripAndEnergy) {
  std::mt19937_64 rng(2);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto u = haar_unitary(8, 77, i);
    const auto v = random_vector(8, rng);
    const auto w = apply_transform(u, v);
    EXPECT_NEAR(w.energy(), v.energy(), 1e-10 * v.energy());
    const auto back = apply_transform(inverse_transform(u), w);
    for (std::size_t k = 0; k < 8; ++k) EXPECT_LE(std::abs(back[k] - v[k]), 1e-12);
    const CMatrix resid = inverse_transform(u).matrix() * u.matrix() - CMatrix::Identity(8, 8);
    EXPECT_LE(resid.cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LE((inverse_transform(u).matrix() - u.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ApplyTransform, UnitaryPreservesCodewordOverlap) {
  std::mt19937_64 rng(4);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto u = haar_unitary(6, 5, i);
    const auto a = random_vector(6, rng), b = random_vector(6, rng);
    EXPECT_LE(std::abs(codeword_overlap(apply_transform(u, a), apply_transform(u, b)) - codeword_overlap(a, b)), 1e-10);
  }
}

TEST(PhaseRandomization, DiagonalAndEnergyPerMode) {
  const std::vector<double> zero(3, 0.0);
  EXPECT_LE((phase_randomization_transform(zero).matrix() - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 0.0);
  const std::vector<double> ph{0.3, 1.7, -2.2};
  const auto t = phase_randomization_transform(ph);
  const CoherentVector v({{1.0, 0.5}, {-0.2, 0.3}, {0.0, 2.0}});
  const auto w = apply_transform(t, v);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::norm(w[i]), std::norm(v[i]), 1e-14);
    EXPECT_NEAR(std::abs(w[i] - v[i] * std::polar(1.0, ph[i])), 0.0, 1e-15);
  }
  EXPECT_THROW(phase_randomization_transform(std::vector<double>{}), ValidationError);
}

TEST(Haar, DeterministicAndUnitary) {
  const auto a = haar_unitary(5, 11, 3), b = haar_unitary(5, 11, 3), c = haar_unitary(5, 11, 4);
  EXPECT_EQ(a.matrix(), b.matrix());
  EXPECT_NE(a.matrix(), c.matrix());
  EXPECT_LE(AmplitudeTransform::unitarity_defect(a.matrix()), 1e-12);
  const auto one = haar_unitary(1, 9, 0);
  EXPECT_NEAR(std::abs(one.matrix()(0, 0)), 1.0, 1e-15);
}

// |U_ij|² of a Haar unitary is Beta(1, M−1): mean 1/M, variance (M−1)/(M²(M+1)).
TEST(Haar, ColumnIsotropyWithinThreeSigma) {
  const int m = 4;
  const int draws = 10000;
  std::vector<double> mean(m, 0.0);
  Complex phase_mean{};
  for (int d = 0; d < draws; ++d) {
    const auto u = haar_unitary(m, 2024, static_cast<std::uint64_t>(d));
    for (int i = 0; i < m; ++i) mean[static_cast<std::size_t>(i)] += std::norm(u.matrix()(i, 0));
    phase_mean += u.matrix()(0, 0);
  }
  const double var = (m - 1.0) / (m * m * (m + 1.0));
  const double sigma = std::sqrt(var / draws);
  for (double s : mean) EXPECT_LE(std::abs(s / draws - 1.0 / m), 3.0 * sigma);
  EXPECT_LE(std::abs(phase_mean / static_cast<double>(draws)), 3.0 * std::sqrt(1.0 / m / draws));
}

TEST(TransformFamily, ValidationAndSelection) {
  const auto fam = keyed_haar_family(4, 8, 3);
  EXPECT_EQ(fam.size(), 8u);
  EXPECT_EQ(fam.dimension(), 4u);
  EXPECT_TRUE(fam.all_unitary());
  EXPECT_EQ(fam.selector_bits(), 3);
  EXPECT_EQ(fam.at(5).matrix(), haar_unitary(4, 3, 5).matrix());
  EXPECT_THROW(fam.at(8), ValidationError);
  EXPECT_THROW(TransformFamily({AmplitudeTransform::identity(2), AmplitudeTransform::identity(3)}), ValidationError);
  CMatrix z = CMatrix::Zero(2, 2);
  EXPECT_THROW(TransformFamily({AmplitudeTransform::general(z)}), ValidationError);
  EXPECT_THROW(TransformFamily({AmplitudeTransform::identity(2), AmplitudeTransform::identity(2),
                                AmplitudeTransform::identity(2)})
                   .selector_bits(),
               ValidationError);
}

TEST(TransformFamily, ProductsAndInversesStayUnitary) {
  const auto fam = keyed_haar_family(6, 4, 8);
  CMatrix p = CMatrix::Identity(6, 6);
  for (const auto& t : fam.members()) p = p * t.matrix() * inverse_transform(fam.at(0)).matrix();
  EXPECT_LE(AmplitudeTransform::unitarity_defect(p), 1e-10);
}

}  // namespace
}  // namespace qcipher
