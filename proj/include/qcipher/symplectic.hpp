// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file symplectic.hpp
 * @brief Keyed amplitude-space transforms α_out = L·α_in.
 *
 * A passive linear-optics network maps a product coherent state to another
 * product coherent state whose amplitude vector is L·α. Only unitary L is
 * accepted by the ciphers; general matrices stay constructible for analysis.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qcipher/coherent.hpp"
#include "qcipher/keystream.hpp"

namespace qcipher {

enum class TransformKind { unitary, general };

inline constexpr double kUnitaryTol = 1e-10;

class AmplitudeTransform {
 public:
  /// Throws unless ‖L†L − I‖_max ≤ 1e-10.
  static AmplitudeTransform unitary(CMatrix m) {
    check_square(m);
    const double dev = unitarity_defect(m);
    if (dev > kUnitaryTol)
      throw ValidationError("AmplitudeTransform: matrix is not unitary (defect " + std::to_string(dev) + ")");
    return AmplitudeTransform(std::move(m), TransformKind::unitary);
  }

  static AmplitudeTransform general(CMatrix m) {
    check_square(m);
    return AmplitudeTransform(std::move(m), TransformKind::general);
  }

  static AmplitudeTransform identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return AmplitudeTransform(CMatrix::Identity(n, n), TransformKind::unitary);
  }

  const CMatrix& matrix() const noexcept { return m_; }
  TransformKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  bool is_unitary() const noexcept { return kind_ == TransformKind::unitary; }

  /// σ_max/σ_min; infinite for singular matrices.
  double condition_number() const {
    Eigen::JacobiSVD<CMatrix> svd(m_);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
  }

  static double unitarity_defect(const CMatrix& m) {
    return (m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
  }

 private:
  AmplitudeTransform(CMatrix m, TransformKind k) : m_(std::move(m)), kind_(k) {}

  static void check_square(const CMatrix& m) {
    detail::require(m.rows() == m.cols() && m.rows() >= 1,
                    "AmplitudeTransform: matrix must be square and non-empty");
    detail::require(m.allFinite(), "AmplitudeTransform: matrix entries must be finite");
  }

  CMatrix m_;
  TransformKind kind_;
};

inline CoherentVector apply_transform(const AmplitudeTransform& l, const CoherentVector& v) {
  detail::require(l.dimension() == v.modes(), "apply_transform: dimension mismatch");
  return CoherentVector::from_eigen(l.matrix() * v.as_eigen());
}

/// L⁻¹; the adjoint when L is unitary.
inline AmplitudeTransform inverse_transform(const AmplitudeTransform& l) {
  if (l.is_unitary()) return AmplitudeTransform::unitary(l.matrix().adjoint());
  Eigen::FullPivLU<CMatrix> lu(l.matrix());
  if (!lu.isInvertible()) throw NumericalError("inverse_transform: singular matrix");
  return AmplitudeTransform::general(lu.inverse());
}

/// diag(e^{iθ₁}, …, e^{iθ_M}).
inline AmplitudeTransform phase_randomization_transform(std::span<const double> phases) {
  detail::require(!phases.empty(), "phase_randomization_transform: no phases");
  const auto n = static_cast<Eigen::Index>(phases.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = std::polar(1.0, phases[static_cast<std::size_t>(i)]);
  return AmplitudeTransform::unitary(std::move(m));
}

/// Unitary DFT F_jk = e^{−2πi·jk/M}/√M.
inline AmplitudeTransform dft_transform(std::size_t dim) {
  detail::require(dim >= 1, "dft_transform: dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix m(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      m(j, k) = std::polar(norm, -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n));
  return AmplitudeTransform::unitary(std::move(m));
}

/// Haar-distributed unitary regenerated from (seed, index): QR of a complex
/// Ginibre matrix with the diagonal phases of R divided out.
inline AmplitudeTransform haar_unitary(std::size_t dim, std::uint64_t seed, std::uint64_t index) {
  detail::require(dim >= 1, "haar_unitary: dimension must be >= 1");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(gen);
      const double im = normal(gen);
      z(i, j) = Complex{re, im};
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return AmplitudeTransform::unitary(std::move(q));
}

/// Indexed transforms selected by running-key chunks.
class TransformFamily {
 public:
  explicit TransformFamily(std::vector<AmplitudeTransform> members) : members_(std::move(members)) {
    detail::require(!members_.empty(), "TransformFamily: needs at least one member");
    for (const auto& m : members_) {
      detail::require(m.dimension() == members_.front().dimension(),
                      "TransformFamily: members must share a dimension");
      detail::require(std::isfinite(m.condition_number()), "TransformFamily: member is singular");
    }
  }

  std::size_t size() const noexcept { return members_.size(); }
  std::size_t dimension() const noexcept { return members_.front().dimension(); }

  bool all_unitary() const noexcept {
    for (const auto& m : members_)
      if (!m.is_unitary()) return false;
    return true;
  }

  /// Running-key bits needed per selection; requires a power-of-two size.
  int selector_bits() const { return log2_exact(static_cast<long long>(members_.size())); }

  const AmplitudeTransform& at(std::size_t chunk) const {
    detail::require(chunk < members_.size(),
                    "TransformFamily: chunk " + std::to_string(chunk) + " is not registered");
    return members_[chunk];
  }

  std::span<const AmplitudeTransform> members() const noexcept { return members_; }

 private:
  std::vector<AmplitudeTransform> members_;
};

inline TransformFamily keyed_haar_family(std::size_t dim, std::size_t count, std::uint64_t seed) {
  detail::require(count >= 1, "keyed_haar_family: count must be >= 1");
  std::vector<AmplitudeTransform> members;
  members.reserve(count);
  for (std::size_t i = 0; i < count; ++i) members.push_back(haar_unitary(dim, seed, i));
  return TransformFamily(std::move(members));
}

}  // namespace qcipher
