// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file security_metrics.hpp
 * @brief Entropies, discrete channels and the Shannon-bound / lifting checks.
 *
 * All logarithms are base 2 (bits) unless a function says otherwise.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "qcipher/errors.hpp"

namespace qcipher {

inline constexpr double kDistributionTol = 1e-10;

class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<double> probs) : p_(std::move(probs)) {
    detail::require(!p_.empty(), "DiscreteDistribution: empty");
    double s = 0.0;
    for (double v : p_) {
      detail::require(v >= 0.0 && std::isfinite(v), "DiscreteDistribution: probabilities must be finite and >= 0");
      s += v;
    }
    detail::require(std::abs(s - 1.0) <= kDistributionTol,
                    "DiscreteDistribution: probabilities sum to " + std::to_string(s));
  }

  static DiscreteDistribution uniform(std::size_t n) {
    detail::require(n >= 1, "DiscreteDistribution::uniform: n must be >= 1");
    return DiscreteDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> probs() const noexcept { return p_; }

 private:
  std::vector<double> p_;
};

/// −p·log2(p) with 0·log 0 = 0.
inline double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

inline double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) h += plogp(v);
  return h;
}

inline double entropy(const DiscreteDistribution& d) { return entropy(d.probs()); }

inline double binary_entropy(double p) { return plogp(p) + plogp(1.0 - p); }

/// Row-stochastic matrix P(y|x): rows are inputs, columns outputs.
class DiscreteChannel {
 public:
  explicit DiscreteChannel(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    detail::require(!rows_.empty() && !rows_.front().empty(), "DiscreteChannel: empty matrix");
    for (const auto& r : rows_) {
      detail::require(r.size() == rows_.front().size(), "DiscreteChannel: ragged rows");
      DiscreteDistribution{r};
    }
  }

  static DiscreteChannel noiseless(std::size_t n) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
    return DiscreteChannel(std::move(rows));
  }

  static DiscreteChannel binary_symmetric(double flip) {
    return DiscreteChannel({{1.0 - flip, flip}, {flip, 1.0 - flip}});
  }

  std::size_t inputs() const noexcept { return rows_.size(); }
  std::size_t outputs() const noexcept { return rows_.front().size(); }
  double operator()(std::size_t x, std::size_t y) const { return rows_[x][y]; }

 private:
  std::vector<std::vector<double>> rows_;
};

namespace detail {

inline void check_input(const DiscreteChannel& ch, const DiscreteDistribution& px) {
  require(ch.inputs() == px.size(), "channel/input dimension mismatch");
}

inline std::vector<double> output_distribution(const DiscreteChannel& ch, const DiscreteDistribution& px) {
  std::vector<double> py(ch.outputs(), 0.0);
  for (std::size_t x = 0; x < ch.inputs(); ++x)
    for (std::size_t y = 0; y < ch.outputs(); ++y) py[y] += px[x] * ch(x, y);
  return py;
}

}  // namespace detail

/// H(X|Y) by Bayes inversion; zero-probability outputs are excluded.
inline double conditional_entropy(const DiscreteChannel& ch, const DiscreteDistribution& px) {
  detail::check_input(ch, px);
  const auto py = detail::output_distribution(ch, px);
  double h = 0.0;
  for (std::size_t y = 0; y < ch.outputs(); ++y) {
    if (py[y] <= 0.0) continue;
    double hy = 0.0;
    for (std::size_t x = 0; x < ch.inputs(); ++x) hy += plogp(px[x] * ch(x, y) / py[y]);
    h += py[y] * hy;
  }
  return h;
}

/// H(Y|X).
inline double output_conditional_entropy(const DiscreteChannel& ch, const DiscreteDistribution& px) {
  detail::check_input(ch, px);
  double h = 0.0;
  for (std::size_t x = 0; x < ch.inputs(); ++x) {
    double hx = 0.0;
    for (std::size_t y = 0; y < ch.outputs(); ++y) hx += plogp(ch(x, y));
    h += px[x] * hx;
  }
  return h;
}

/// I(X;Y) = H(X) − H(X|Y); throws if H(Y) − H(Y|X) disagrees by > 1e-10.
inline double mutual_information(const DiscreteChannel& ch, const DiscreteDistribution& px) {
  const double via_input = entropy(px) - conditional_entropy(ch, px);
  const double via_output = entropy(detail::output_distribution(ch, px)) - output_conditional_entropy(ch, px);
  if (std::abs(via_input - via_output) > 1e-10)
    throw NumericalError("mutual_information: chain identity violated by " +
                         std::to_string(std::abs(via_input - via_output)));
  return std::max(0.0, via_input);
}

enum class ShannonVerdict { bounded, lifted };

inline std::string to_string(ShannonVerdict v) { return v == ShannonVerdict::lifted ? "lifted" : "bounded"; }

/// "lifted" iff H(X|Y) exceeds H(K) by more than 1e-9 bits.
inline ShannonVerdict shannon_bound_check(double h_x_given_y, double h_k) {
  detail::require(h_x_given_y >= 0.0 && h_k >= 0.0, "shannon_bound_check: entropies must be >= 0");
  return h_x_given_y > h_k + 1e-9 ? ShannonVerdict::lifted : ShannonVerdict::bounded;
}

/// One slot of a keyed run: the (key, plaintext) context and both records.
struct KeyedRecord {
  std::uint64_t context;
  std::int64_t bob_outcome;
  std::int64_t eve_outcome;
};

struct LiftingConditions {
  double h_bob_given_kx = 0.0;
  double h_eve_given_kx = 0.0;
  bool bob_determined = false;  // Bob's record is a function of (K, X)
  bool eve_randomized = false;  // Eve's record still varies at fixed (K, X)
};

/// Plug-in estimates of H(Y^B|K,X) and H(Y^E|K,X) from repeated contexts.
inline LiftingConditions lifting_conditions_check(std::span<const KeyedRecord> trace) {
  std::map<std::uint64_t, std::pair<std::map<std::int64_t, std::size_t>, std::map<std::int64_t, std::size_t>>> groups;
  for (const auto& r : trace) {
    auto& g = groups[r.context];
    ++g.first[r.bob_outcome];
    ++g.second[r.eve_outcome];
  }
  bool repeated = false;
  for (const auto& [ctx, g] : groups) {
    std::size_t n = 0;
    for (const auto& [o, c] : g.first) n += c;
    if (n >= 2) repeated = true;
  }
  if (!repeated) throw ValidationError("lifting_conditions_check: no (K, X) context is repeated");

  const auto total = static_cast<double>(trace.size());
  auto conditional = [&](auto member) {
    double h = 0.0;
    for (const auto& [ctx, g] : groups) {
      const auto& counts = g.*member;
      std::size_t n = 0;
      for (const auto& [o, c] : counts) n += c;
      double hg = 0.0;
      for (const auto& [o, c] : counts) hg += plogp(static_cast<double>(c) / static_cast<double>(n));
      h += static_cast<double>(n) / total * hg;
    }
    return h;
  };
  using Group = std::pair<std::map<std::int64_t, std::size_t>, std::map<std::int64_t, std::size_t>>;
  LiftingConditions out;
  out.h_bob_given_kx = conditional(&Group::first);
  out.h_eve_given_kx = conditional(&Group::second);
  out.bob_determined = out.h_bob_given_kx == 0.0;
  out.eve_randomized = out.h_eve_given_kx > 0.0;
  return out;
}

/// n ≥ H(K)/C₁; +∞ when C₁ = 0.
inline double unicity_lower_bound(double h_k, double c1) {
  detail::require(c1 >= 0.0 && h_k >= 0.0, "unicity_lower_bound: inputs must be >= 0");
  if (c1 == 0.0) return std::numeric_limits<double>::infinity();
  return h_k / c1;
}

/// η = H(K)/H(X|Y); η < 1 marks the lifted regime.
inline double locking_eta(double h_k, double h_x_given_y) {
  detail::require(h_x_given_y > 0.0, "locking_eta: H(X|Y) must be > 0");
  return h_k / h_x_given_y;
}

enum class LogBase { binary, natural };

/// Key entropy 4·log(1/ε) required to lock accessible information below ε·log|X|.
inline double locking_key_entropy(double epsilon, LogBase base = LogBase::binary) {
  detail::require(epsilon > 0.0 && epsilon < 1.0, "locking_key_entropy: epsilon must be in (0, 1)");
  return 4.0 * (base == LogBase::binary ? std::log2(1.0 / epsilon) : std::log(1.0 / epsilon));
}

struct LockingCalc {
  double epsilon;
  double n_bits;
  double h_k;
  double h_x_given_y_min;  // (1 − ε)·n
  double eta_max;
};

/// Data-locking figures for an n-bit block: H(X|Y) ≥ n − I_acc > (1 − ε)n.
inline LockingCalc locking_calc(double epsilon, double n_bits, LogBase base = LogBase::binary) {
  detail::require(n_bits >= 1.0, "locking_calc: n must be >= 1");
  LockingCalc c{epsilon, n_bits, locking_key_entropy(epsilon, base), (1.0 - epsilon) * n_bits, 0.0};
  c.eta_max = locking_eta(c.h_k, c.h_x_given_y_min);
  return c;
}

/// η(n) with ε = 1/n, which scales as log n / n.
inline double locking_eta_scaling(double n_bits) { return locking_calc(1.0 / n_bits, n_bits).eta_max; }

/// Σ_x |p(x) − p(x|y)| (not halved).
inline double variational_distance(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  detail::require(p.size() == q.size(), "variational_distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return d;
}

}  // namespace qcipher
