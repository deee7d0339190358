// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

// Reference computations used only by the tests. Each one takes a different
// route from the library code it checks.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;

/// ⟨n|α⟩ from the log-domain Poisson amplitude, n = 0..n_max.
inline Eigen::VectorXcd fock_vector(C alpha, int n_max) {
  Eigen::VectorXcd v(n_max + 1);
  const double r = std::abs(alpha);
  const double th = std::arg(alpha);
  for (int n = 0; n <= n_max; ++n) {
    const double mag = r == 0.0 ? (n == 0 ? 1.0 : 0.0)
                                : std::exp(-0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0));
    v(n) = std::polar(mag, n * th);
  }
  return v;
}

/// Dense Fock-space mixture (1/|S|) Σ |α_j⟩⟨α_j|.
inline Eigen::MatrixXcd mixture(const std::vector<C>& points, int n_max) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  for (const auto& a : points) {
    const auto v = fock_vector(a, n_max);
    rho += v * v.adjoint();
  }
  return rho / static_cast<double>(points.size());
}

inline double trace_norm_half(const Eigen::MatrixXcd& d) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d);
  return 0.5 * svd.singularValues().sum();
}

/// Gram-matrix eigenvalues of J-PSK by an explicit DFT of the first row.
inline std::vector<double> psk_gram_eigenvalues_dft(int j, double amp) {
  std::vector<double> out(static_cast<std::size_t>(j));
  for (int l = 0; l < j; ++l) {
    C s{};
    for (int k = 0; k < j; ++k) {
      const double ph = 2.0 * std::numbers::pi * k / j;
      const C ov = std::exp(amp * amp * (std::polar(1.0, ph) - 1.0));
      s += ov * std::polar(1.0, -2.0 * std::numbers::pi * k * l / j);
    }
    out[static_cast<std::size_t>(l)] = s.real();
  }
  return out;
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

inline double binary_entropy(double p) {
  auto t = [](double v) { return v > 0.0 ? -v * std::log2(v) : 0.0; };
  return t(p) + t(1.0 - p);
}

/// Bit-list Fibonacci LFSR: out = s[0]; feedback = XOR of s[L − t] over taps;
/// shift left and append feedback. s[0] is the least significant state bit.
struct ListLfsr {
  std::vector<int> s;
  std::vector<int> taps;
  int step() {
    const int out = s.front();
    int fb = 0;
    for (int t : taps) fb ^= s[static_cast<std::size_t>(static_cast<int>(s.size()) - t)];
    s.erase(s.begin());
    s.push_back(fb);
    return out;
  }
};

}  // namespace oracle
