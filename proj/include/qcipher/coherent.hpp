// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file coherent.hpp
 * @brief Coherent-state algebra on complex amplitudes.
 *
 * Amplitudes are shot-noise normalized: |α|² is the mean photon number.
 * Multimode states are products of single-mode coherent states, so every
 * inner product reduces to a product of per-mode overlaps. Mixed states
 * live in a truncated number (Fock) basis |0⟩..|n_max⟩.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcipher/errors.hpp"

namespace qcipher {

using Complex = std::complex<double>;
/// Single-mode coherent amplitude α.
using Amplitude = Complex;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline bool is_finite(Amplitude a) noexcept {
  return std::isfinite(a.real()) && std::isfinite(a.imag());
}

/// Ordered per-mode amplitudes of a product coherent state |α₁⟩|α₂⟩…|α_M⟩.
class CoherentVector {
 public:
  explicit CoherentVector(std::vector<Amplitude> amplitudes)
      : amps_(std::move(amplitudes)) {
    detail::require(!amps_.empty(), "CoherentVector needs at least one mode");
    for (const auto& a : amps_)
      detail::require(is_finite(a), "CoherentVector amplitudes must be finite");
  }

  static CoherentVector vacuum(std::size_t modes) {
    return CoherentVector(std::vector<Amplitude>(modes, Amplitude{}));
  }

  std::size_t modes() const noexcept { return amps_.size(); }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }

  /// Total mean photon number Σ|αᵢ|².
  double energy() const noexcept {
    double e = 0.0;
    for (const auto& a : amps_) e += std::norm(a);
    return e;
  }

  CVector as_eigen() const {
    CVector v(static_cast<Eigen::Index>(amps_.size()));
    for (std::size_t i = 0; i < amps_.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps_[i];
    return v;
  }

  static CoherentVector from_eigen(const CVector& v) {
    return CoherentVector(std::vector<Amplitude>(v.data(), v.data() + v.size()));
  }

  friend bool operator==(const CoherentVector&, const CoherentVector&) = default;

 private:
  std::vector<Amplitude> amps_;
};

/// ⟨a|b⟩ = exp(−(|a|²+|b|²)/2 + a*·b).
inline Complex overlap(Amplitude a, Amplitude b) {
  return std::exp(-(std::norm(a) + std::norm(b)) / 2.0 + std::conj(a) * b);
}

inline Complex codeword_overlap(const CoherentVector& a, const CoherentVector& b) {
  detail::require(a.modes() == b.modes(), "codeword_overlap: mode count mismatch");
  Complex prod{1.0, 0.0};
  for (std::size_t i = 0; i < a.modes(); ++i) prod *= overlap(a[i], b[i]);
  return prod;
}

/// Gram matrix G_ij = ⟨ψ_i|ψ_j⟩ of a set of product coherent states.
inline CMatrix gram_matrix(std::span<const CoherentVector> states) {
  detail::require(!states.empty(), "gram_matrix: empty state list");
  const auto n = static_cast<Eigen::Index>(states.size());
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      g(i, j) = codeword_overlap(states[static_cast<std::size_t>(i)],
                                 states[static_cast<std::size_t>(j)]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

/// Equally spaced phase constellation: point j has phase offset + 2πj/size.
class PskConstellation {
 public:
  PskConstellation(int size, double amplitude, double offset = 0.0)
      : size_(size), amplitude_(amplitude), offset_(offset) {
    detail::require(size >= 1, "PskConstellation: size must be >= 1");
    detail::require(amplitude >= 0.0 && std::isfinite(amplitude),
                    "PskConstellation: amplitude must be finite and >= 0");
  }

  int size() const noexcept { return size_; }
  double amplitude() const noexcept { return amplitude_; }
  double offset() const noexcept { return offset_; }
  double spacing() const noexcept { return 2.0 * std::numbers::pi / size_; }

  double phase(int j) const {
    detail::require(j >= 0 && j < size_, "PskConstellation: index out of range");
    return offset_ + spacing() * j;
  }
  Amplitude point(int j) const { return std::polar(amplitude_, phase(j)); }

  std::vector<CoherentVector> states() const {
    std::vector<CoherentVector> out;
    out.reserve(static_cast<std::size_t>(size_));
    for (int j = 0; j < size_; ++j) out.emplace_back(std::vector<Amplitude>{point(j)});
    return out;
  }

 private:
  int size_;
  double amplitude_;
  double offset_;
};

/// n_max = ceil(n̄ + 10·√n̄ + 20); the Poisson tail beyond it is < 1e-12.
inline int fock_truncation(double mean_photons) {
  detail::require(mean_photons >= 0.0 && std::isfinite(mean_photons),
                  "fock_truncation: mean photon number must be finite and >= 0");
  return static_cast<int>(std::ceil(mean_photons + 10.0 * std::sqrt(mean_photons) + 20.0));
}

/// Number-basis coefficients ⟨n|α⟩ = e^{−|α|²/2} αⁿ/√n!, n = 0..n_max.
inline CVector fock_coefficients(Amplitude alpha, int n_max) {
  detail::require(n_max >= 0, "fock_coefficients: n_max must be >= 0");
  CVector c(n_max + 1);
  c(0) = std::exp(-std::norm(alpha) / 2.0);
  for (int n = 1; n <= n_max; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kTruncationDeficitTol = 1e-9;

/// Density operator in the truncated number basis.
class FockDensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity.
  static FockDensityMatrix from_matrix(CMatrix m) {
    detail::require(m.rows() == m.cols() && m.rows() >= 1,
                    "FockDensityMatrix: matrix must be square and non-empty");
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol)
      throw NumericalError("FockDensityMatrix: not Hermitian (deviation " + std::to_string(herm) + ")");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol)
      throw NumericalError("FockDensityMatrix: trace " + std::to_string(tr) + " != 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPositivityTol)
      throw NumericalError("FockDensityMatrix: negative eigenvalue");
    return FockDensityMatrix(std::move(m));
  }

  /// |α⟩⟨α| truncated at n_max and renormalized; throws if the truncated
  /// weight is short by more than 1e-9.
  static FockDensityMatrix pure(Amplitude alpha, int n_max) {
    CVector c = fock_coefficients(alpha, n_max);
    const double w = c.squaredNorm();
    if (1.0 - w > kTruncationDeficitTol)
      throw NumericalError("FockDensityMatrix::pure: truncation n_max=" + std::to_string(n_max) +
                           " too small (trace deficit " + std::to_string(1.0 - w) + ")");
    c /= std::sqrt(w);
    return FockDensityMatrix(c * c.adjoint());
  }

  const CMatrix& matrix() const noexcept { return m_; }
  int n_max() const noexcept { return static_cast<int>(m_.rows()) - 1; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  double purity() const { return (m_ * m_).trace().real(); }

 private:
  explicit FockDensityMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

namespace detail {

/// (1/|S|)·Σ_{j∈S} exp(2πi·j·d/J) for a subset S of Z_J.
///
/// Residues j·d mod J are counted in integers and antipodal roots are folded
/// (ω^{r+J/2} = −ω^r), so sums over symmetric subsets cancel exactly.
inline Complex subset_phase_sum(std::span<const int> subset, int size, long long d) {
  std::vector<long long> counts(static_cast<std::size_t>(size), 0);
  const long long dm = ((d % size) + size) % size;
  for (int j : subset) ++counts[static_cast<std::size_t>((j * dm) % size)];
  Complex sum{};
  const double step = 2.0 * std::numbers::pi / size;
  if (size % 2 == 0) {
    const int half = size / 2;
    for (int r = 0; r < half; ++r) {
      const long long w = counts[static_cast<std::size_t>(r)] - counts[static_cast<std::size_t>(r + half)];
      if (w != 0) sum += static_cast<double>(w) * (r == 0 ? Complex{1.0, 0.0} : std::polar(1.0, step * r));
    }
  } else {
    for (int r = 0; r < size; ++r) {
      const long long w = counts[static_cast<std::size_t>(r)];
      if (w != 0) sum += static_cast<double>(w) * (r == 0 ? Complex{1.0, 0.0} : std::polar(1.0, step * r));
    }
  }
  return sum / static_cast<double>(subset.size());
}

}  // namespace detail

/// Equal-weight mixture (1/|S|)·Σ_{j∈S} |α_j⟩⟨α_j| over constellation points.
inline FockDensityMatrix psk_mixture_density(const PskConstellation& constellation,
                                             std::span<const int> indices, int n_max) {
  detail::require(!indices.empty(), "psk_mixture_density: empty index subset");
  for (int j : indices)
    detail::require(j >= 0 && j < constellation.size(), "psk_mixture_density: index out of range");
  CVector c = fock_coefficients(Amplitude{constellation.amplitude(), 0.0}, n_max);
  const double w = c.squaredNorm();
  if (1.0 - w > kTruncationDeficitTol)
    throw NumericalError("psk_mixture_density: truncation n_max=" + std::to_string(n_max) +
                         " too small (trace deficit " + std::to_string(1.0 - w) + ")");
  c /= std::sqrt(w);

  // ρ_nm = c_n c_m · e^{i·offset·(n−m)} · S(n−m), with S(−d) = conj S(d).
  std::vector<Complex> phase(static_cast<std::size_t>(n_max) + 1);
  for (int d = 0; d <= n_max; ++d)
    phase[static_cast<std::size_t>(d)] =
        std::polar(1.0, constellation.offset() * d) *
        detail::subset_phase_sum(indices, constellation.size(), d);

  CMatrix rho(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n; ++m) {
      const Complex v = c(n) * std::conj(c(m)) * phase[static_cast<std::size_t>(n - m)];
      rho(n, m) = v;
      rho(m, n) = std::conj(v);
    }
  }
  for (int n = 0; n <= n_max; ++n) rho(n, n) = Complex{rho(n, n).real(), 0.0};
  return FockDensityMatrix::from_matrix(std::move(rho));
}

/// Eigenvalues of a Hermitian difference, used for trace norms.
inline Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// ½‖ρ − σ‖₁.
inline double trace_distance(const FockDensityMatrix& rho, const FockDensityMatrix& sigma) {
  detail::require(rho.dim() == sigma.dim(), "trace_distance: dimension mismatch");
  const double d = 0.5 * hermitian_eigenvalues(rho.matrix() - sigma.matrix()).cwiseAbs().sum();
  return std::clamp(d, 0.0, 1.0);
}

}  // namespace qcipher
