// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file measurements.hpp
 * @brief Receiver models and discrimination bounds for coherent states.
 *
 * Noise conventions: heterodyne adds independent Gaussian noise of standard
 * deviation σ_he = 1 to each quadrature of α; phase-sensitive homodyne
 * (the keyed receiver) sees a single quadrature with σ_he/√2.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qcipher/coherent.hpp"

namespace qcipher {

inline constexpr double kHeterodyneSigma = 1.0;
inline constexpr double kHomodyneSigma = kHeterodyneSigma / std::numbers::sqrt2;

/// P(no click | α) = exp(−|α|²).
inline double photon_count_prob(Amplitude alpha) { return std::exp(-std::norm(alpha)); }

struct HeterodyneSample {
  Complex z;
  double phase() const { return std::arg(z); }
};

template <class Rng>
HeterodyneSample heterodyne_sample(Amplitude alpha, Rng& rng, double sigma = kHeterodyneSigma) {
  std::normal_distribution<double> noise(0.0, sigma);
  const double re = noise(rng);
  const double im = noise(rng);
  return {alpha + Complex{re, im}};
}

/// Quadrature Re(α·e^{−iφ}) plus Gaussian noise.
template <class Rng>
double homodyne_sample(Amplitude alpha, double quadrature_phase, Rng& rng, double sigma = kHomodyneSigma) {
  std::normal_distribution<double> noise(0.0, sigma);
  return (alpha * std::polar(1.0, -quadrature_phase)).real() + noise(rng);
}

/// Standard normal upper tail Q(x).
inline double gaussian_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Minimum error for |a0⟩ vs |a1⟩ with priors (prior0, 1 − prior0).
inline double helstrom_binary_pure(Amplitude a0, Amplitude a1, double prior0 = 0.5) {
  detail::require(prior0 > 0.0 && prior0 < 1.0, "helstrom_binary_pure: prior must be in (0, 1)");
  const double s2 = std::norm(overlap(a0, a1));
  const double arg = std::max(0.0, 1.0 - 4.0 * prior0 * (1.0 - prior0) * s2);
  return 0.5 * (1.0 - std::sqrt(arg));
}

/// ½ − ½‖p₀ρ₀ − p₁ρ₁‖₁.
inline double helstrom_binary_mixed(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1,
                                    double prior0 = 0.5) {
  detail::require(rho0.dim() == rho1.dim(), "helstrom_binary_mixed: dimension mismatch");
  detail::require(prior0 > 0.0 && prior0 < 1.0, "helstrom_binary_mixed: prior must be in (0, 1)");
  const CMatrix gamma = prior0 * rho0.matrix() - (1.0 - prior0) * rho1.matrix();
  const double norm1 = hermitian_eigenvalues(gamma).cwiseAbs().sum();
  return std::clamp(0.5 - 0.5 * norm1, 0.0, 0.5);
}

/// Projector Π₀ onto the positive eigenspace of p₀ρ₀ − p₁ρ₁ (decide "0").
/// A zero difference yields Π₀ = 0, so the outcome carries no information.
inline CMatrix helstrom_projector(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1,
                                  double prior0 = 0.5) {
  detail::require(rho0.dim() == rho1.dim(), "helstrom_projector: dimension mismatch");
  const CMatrix gamma = prior0 * rho0.matrix() - (1.0 - prior0) * rho1.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gamma);
  CMatrix pi0 = CMatrix::Zero(gamma.rows(), gamma.cols());
  for (Eigen::Index k = 0; k < gamma.rows(); ++k)
    if (es.eigenvalues()(k) > 0.0) pi0 += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  return pi0;
}

struct SrmResult {
  double error = 0.0;
  std::vector<double> success;  // per-state |⟨μ_i|ψ_i⟩|²
};

inline constexpr double kGramSingularTol = 1e-12;

namespace detail {

inline SrmResult srm_from_root(const CMatrix& g_half) {
  SrmResult out;
  out.success.resize(static_cast<std::size_t>(g_half.rows()));
  double mean = 0.0;
  for (Eigen::Index i = 0; i < g_half.rows(); ++i) {
    out.success[static_cast<std::size_t>(i)] = std::norm(g_half(i, i));
    mean += out.success[static_cast<std::size_t>(i)];
  }
  out.error = std::clamp(1.0 - mean / static_cast<double>(g_half.rows()), 0.0, 1.0);
  return out;
}

}  // namespace detail

/// Square-root measurement for equiprobable pure states, evaluated in the
/// span of the signals: success_i = ((G^{1/2})_ii)².
///
/// Single-mode sets factor G = A†A with A the number-basis coefficient
/// columns, and G^{1/2} = VΣV† comes from the SVD of A, which resolves
/// small singular values to absolute precision. The set is rejected as
/// linearly dependent when σ_min ≤ 1e-12·σ_max. Multi-mode sets use the
/// eigendecomposition of G and require λ_min > 1e-12.
inline SrmResult srm_general(std::span<const CoherentVector> states) {
  detail::require(states.size() >= 2, "srm_general: need at least two states");
  const bool single_mode =
      std::all_of(states.begin(), states.end(), [](const CoherentVector& v) { return v.modes() == 1; });
  if (single_mode) {
    double n_max = 0.0;
    for (const auto& v : states) n_max = std::max(n_max, v.energy());
    const int k = std::max(fock_truncation(n_max), static_cast<int>(states.size()) + 20);
    CMatrix a(k + 1, static_cast<Eigen::Index>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = fock_coefficients(states[i][0], k);
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= kGramSingularTol * sv(0))
      throw NumericalError("srm_general: Gram matrix is singular (states linearly dependent)");
    const CMatrix& v = svd.matrixV();
    return detail::srm_from_root(v * sv.asDiagonal() * v.adjoint());
  }
  const CMatrix g = gram_matrix(states);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  if (es.eigenvalues().minCoeff() <= kGramSingularTol)
    throw NumericalError("srm_general: Gram matrix is singular (states linearly dependent)");
  const Eigen::VectorXd root = es.eigenvalues().cwiseSqrt();
  return detail::srm_from_root(es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint());
}

struct SymmetricSrm {
  double error = 0.0;
  std::vector<double> eigenvalues;  // λ_l, l = 0..J−1
};

/// Closed form for J-ary PSK: λ_l = Σ_k ⟨α₁|α_k⟩·u^{−(k−1)l}, u = e^{2πi/J},
/// error = 1 − (Σ√λ_l)²/J².
///
/// The DFT sum equals J·e^{−n}·Σ_{m ≡ l (mod J)} nᵐ/m!, which is summed here
/// directly so that eigenvalues far below machine epsilon keep full relative
/// precision.
inline SymmetricSrm srm_symmetric_psk(int j_phases, double amp) {
  detail::require(j_phases >= 2, "srm_symmetric_psk: J must be >= 2");
  detail::require(amp >= 0.0 && std::isfinite(amp), "srm_symmetric_psk: amplitude must be >= 0");
  const double n = amp * amp;
  SymmetricSrm out;
  out.eigenvalues.assign(static_cast<std::size_t>(j_phases), 0.0);
  if (n == 0.0) {
    out.eigenvalues[0] = j_phases;
  } else {
    const int m_max = fock_truncation(n) + j_phases;
    const double log_n = std::log(n);
    for (int m = 0; m <= m_max; ++m)
      out.eigenvalues[static_cast<std::size_t>(m % j_phases)] += std::exp(-n + m * log_n - std::lgamma(m + 1.0));
    for (auto& v : out.eigenvalues) v *= j_phases;
  }
  double root_sum = 0.0;
  for (double v : out.eigenvalues) root_sum += std::sqrt(v);
  const double success = root_sum * root_sum / (static_cast<double>(j_phases) * j_phases);
  out.error = std::clamp(1.0 - success, 0.0, 1.0);
  return out;
}

enum class DistanceConvention {
  literal,    // Δ = |α|(1 − cos δ)^{1/2}
  euclidean,  // Δ = |α|(2(1 − cos δ))^{1/2}, the chord between neighbours
};

inline double neighbour_distance(int j_phases, double amp, DistanceConvention conv) {
  const double delta = 2.0 * std::numbers::pi / j_phases;
  const double base = 1.0 - std::cos(delta);
  return amp * std::sqrt(conv == DistanceConvention::literal ? base : 2.0 * base);
}

/// Per-mode heterodyne PSK error 1 − erf(Δ/2σ_he).
inline double heterodyne_psk_error(int j_phases, double amp,
                                   DistanceConvention conv = DistanceConvention::literal,
                                   double sigma = kHeterodyneSigma) {
  detail::require(j_phases >= 2, "heterodyne_psk_error: J must be >= 2");
  return 1.0 - std::erf(neighbour_distance(j_phases, amp, conv) / (2.0 * sigma));
}

/// Nearest-phase decision: index of the closest of J equally spaced phases.
inline int nearest_phase_index(Complex z, int j_phases, double offset = 0.0) {
  const double step = 2.0 * std::numbers::pi / j_phases;
  const double t = (std::arg(z) - offset) / step;
  const long long k = std::llround(t);
  return static_cast<int>(((k % j_phases) + j_phases) % j_phases);
}

/// Monte Carlo rate of nearest-phase decision errors for heterodyne on J-PSK.
template <class Rng>
double heterodyne_psk_error_mc(int j_phases, double amp, std::size_t samples, Rng& rng,
                               double sigma = kHeterodyneSigma) {
  detail::require(samples > 0, "heterodyne_psk_error_mc: samples must be > 0");
  std::size_t errors = 0;
  for (std::size_t s = 0; s < samples; ++s)
    if (nearest_phase_index(heterodyne_sample(Amplitude{amp, 0.0}, rng, sigma).z, j_phases) != 0) ++errors;
  return static_cast<double>(errors) / static_cast<double>(samples);
}

/// Density of arg(α + w) − arg α for heterodyne noise of std σ per quadrature.
inline double heterodyne_phase_density(double theta, double amp, double sigma = kHeterodyneSigma) {
  const double rho = amp * amp / (2.0 * sigma * sigma);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return std::exp(-rho) / (2.0 * std::numbers::pi) +
         std::sqrt(rho) * c / (2.0 * std::sqrt(std::numbers::pi)) * std::exp(-rho * s * s) *
             (1.0 + std::erf(std::sqrt(rho) * c));
}

/// Bin index of arg z for `bins` uniform bins over [−π, π).
inline int phase_bin(Complex z, int bins) {
  const double u = (std::arg(z) + std::numbers::pi) / (2.0 * std::numbers::pi);
  return std::clamp(static_cast<int>(u * bins), 0, bins - 1);
}

/// P(bin b | α) for heterodyne phase outcomes in `bins` uniform bins.
inline std::vector<double> heterodyne_phase_bin_probabilities(Amplitude alpha, int bins,
                                                              double sigma = kHeterodyneSigma) {
  detail::require(bins >= 1, "heterodyne_phase_bin_probabilities: bins must be >= 1");
  const double amp = std::abs(alpha);
  const double mean_phase = std::arg(alpha);
  const double width = 2.0 * std::numbers::pi / bins;
  std::vector<double> p(static_cast<std::size_t>(bins));
  double total = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double lo = -std::numbers::pi + width * b;
    auto f = [&](double t) { return heterodyne_phase_density(t - mean_phase, amp, sigma); };
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, lo + width, 12, 1e-13);
    p[static_cast<std::size_t>(b)] = std::max(0.0, v);
    total += p[static_cast<std::size_t>(b)];
  }
  for (auto& v : p) v /= total;
  return p;
}

/// Positive operator-valued measure on a finite-dimensional space.
class Povm {
 public:
  explicit Povm(std::vector<CMatrix> elements) : elements_(std::move(elements)) {
    detail::require(!elements_.empty(), "Povm: needs at least one element");
    const auto d = elements_.front().rows();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& e : elements_) {
      detail::require(e.rows() == d && e.cols() == d, "Povm: elements must share a square dimension");
      detail::require((e - e.adjoint()).cwiseAbs().maxCoeff() <= 1e-10, "Povm: element not Hermitian");
      detail::require(hermitian_eigenvalues(e).minCoeff() >= -1e-10, "Povm: element not positive");
      sum += e;
    }
    detail::require((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10,
                    "Povm: elements do not sum to the identity");
  }

  /// Rank-one projective measurement from an orthonormal basis (columns).
  static Povm projective(const CMatrix& basis) {
    std::vector<CMatrix> el;
    for (Eigen::Index k = 0; k < basis.cols(); ++k) el.emplace_back(basis.col(k) * basis.col(k).adjoint());
    return Povm(std::move(el));
  }

  std::size_t size() const noexcept { return elements_.size(); }
  Eigen::Index dim() const noexcept { return elements_.front().rows(); }
  const CMatrix& operator[](std::size_t j) const { return elements_[j]; }

 private:
  std::vector<CMatrix> elements_;
};

/// Raised when an outcome with a nonzero POVM element has zero probability
/// under every input, which makes the log in F_j diverge.
class ZeroOutcomeProbability : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Pure states as vectors in an orthonormal basis of their span:
/// ψ_i†ψ_j = G_ij.
inline std::vector<CVector> span_representation(std::span<const CoherentVector> states) {
  const CMatrix g = gram_matrix(states);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < g.rows(); ++k)
    if (es.eigenvalues()(k) > 1e-14) keep.push_back(k);
  CMatrix psi(static_cast<Eigen::Index>(keep.size()), g.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const auto k = keep[r];
    psi.row(static_cast<Eigen::Index>(r)) = std::sqrt(es.eigenvalues()(k)) * es.eigenvectors().col(k).adjoint();
  }
  std::vector<CVector> out;
  for (Eigen::Index i = 0; i < g.cols(); ++i) out.emplace_back(psi.col(i));
  return out;
}

/// max_{i,j} ‖Π_j (F_j − F_i) Π_i‖ with F_j = Σ_l ξ_l ρ_l ln(P(j|l)/Σ_k ξ_k P(j|k)).
/// Zero means the stationarity condition for maximal mutual information holds.
inline double holevo_optimality_residual(std::span<const CMatrix> states, std::span<const double> priors,
                                         const Povm& povm) {
  detail::require(!states.empty() && states.size() == priors.size(),
                  "holevo_optimality_residual: states and priors must have equal non-zero length");
  double psum = 0.0;
  for (double p : priors) {
    detail::require(p >= 0.0, "holevo_optimality_residual: negative prior");
    psum += p;
  }
  detail::require(std::abs(psum - 1.0) <= 1e-10, "holevo_optimality_residual: priors must sum to 1");
  for (const auto& rho : states)
    detail::require(rho.rows() == povm.dim() && rho.cols() == povm.dim(),
                    "holevo_optimality_residual: dimension mismatch");

  constexpr double kZero = 1e-15;
  const std::size_t n_in = states.size();
  const std::size_t n_out = povm.size();
  std::vector<std::vector<double>> p(n_in, std::vector<double>(n_out));
  for (std::size_t i = 0; i < n_in; ++i)
    for (std::size_t j = 0; j < n_out; ++j) p[i][j] = std::max(0.0, (states[i] * povm[j]).trace().real());

  const auto d = povm.dim();
  std::vector<CMatrix> f(n_out, CMatrix::Zero(d, d));
  for (std::size_t j = 0; j < n_out; ++j) {
    double q = 0.0;
    for (std::size_t k = 0; k < n_in; ++k) q += priors[k] * p[k][j];
    if (q <= kZero) {
      if (povm[j].cwiseAbs().maxCoeff() > 1e-12)
        throw ZeroOutcomeProbability("holevo_optimality_residual: outcome " + std::to_string(j) +
                                     " has zero probability but a nonzero POVM element");
      continue;
    }
    // Terms with P(j|l) = 0 satisfy Π_j ρ_l = 0 and drop out of every sandwich.
    for (std::size_t l = 0; l < n_in; ++l)
      if (p[l][j] > kZero && priors[l] > 0.0) f[j] += priors[l] * std::log(p[l][j] / q) * states[l];
  }

  double residual = 0.0;
  for (std::size_t i = 0; i < n_out; ++i)
    for (std::size_t j = 0; j < n_out; ++j) {
      if (i == j) continue;
      const CMatrix m = povm[j] * (f[j] - f[i]) * povm[i];
      Eigen::JacobiSVD<CMatrix> svd(m);
      residual = std::max(residual, svd.singularValues()(0));
    }
  return residual;
}

}  // namespace qcipher
