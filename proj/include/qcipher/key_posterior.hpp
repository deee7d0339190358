// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file key_posterior.hpp
 * @brief Exhaustive Bayesian key posterior over small key spaces, unicity
 * detection, and plaintext equivocation H(X|Y).
 *
 * A model enumerates keys, steps every key's running key one slot at a time
 * and exposes, per key and data value, the index of the transmitted state;
 * outcome probabilities are looked up by state index.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "qcipher/errors.hpp"
#include "qcipher/security_metrics.hpp"

namespace qcipher {

template <class M>
concept KeyedObservationModel = requires(M& m, const M& cm, std::size_t k, int x, int s, int y) {
  { cm.key_count() } -> std::convertible_to<std::size_t>;
  { cm.outcome_count() } -> std::convertible_to<std::size_t>;
  { cm.state(k, x) } -> std::convertible_to<int>;
  { cm.outcome_probability(s, y) } -> std::convertible_to<double>;
  m.reset();
  m.advance();
};

enum class AttackKind { known_plaintext, ciphertext_only };

inline constexpr std::size_t kMaxKeySpace = std::size_t{1} << 20;
inline constexpr double kUnicityThreshold = 1e-6;

namespace detail {

template <KeyedObservationModel M>
void check_key_space(const M& model) {
  if (model.key_count() > kMaxKeySpace)
    throw ValidationError("key posterior: key space of " + std::to_string(model.key_count()) +
                          " keys exceeds the 2^20 enumeration limit");
  require(model.key_count() >= 1 && model.outcome_count() >= 1, "key posterior: empty model");
}

/// P(y | key, slot) with the data value known (KPA) or averaged (COA).
template <KeyedObservationModel M>
double slot_likelihood(const M& model, std::size_t k, AttackKind attack, int x, int y) {
  if (attack == AttackKind::known_plaintext) return model.outcome_probability(model.state(k, x), y);
  return 0.5 * (model.outcome_probability(model.state(k, 0), y) + model.outcome_probability(model.state(k, 1), y));
}

template <class Rng>
int sample_index(std::span<const double> weights, Rng& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return static_cast<int>(i);
    u -= weights[i];
  }
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return static_cast<int>(i);
  return 0;
}

/// Normalizes log-weights in place into probabilities.
inline void normalize_log(std::vector<double>& lw) {
  const double mx = *std::max_element(lw.begin(), lw.end());
  if (!std::isfinite(mx)) throw NumericalError("key posterior: observation impossible under every key");
  double s = 0.0;
  for (auto& v : lw) s += (v = std::exp(v - mx));
  for (auto& v : lw) v /= s;
}

}  // namespace detail

struct KeyPosteriorCurve {
  double prior_entropy = 0.0;
  std::vector<double> entropy;               // after n = 1..N slots
  std::optional<std::size_t> unicity_slots;  // first n with entropy ≤ 1e-6 bits
};

/// Exact posterior entropy curve for a given observation sequence.
/// `plaintext` is required for known-plaintext attacks.
template <KeyedObservationModel M>
KeyPosteriorCurve brute_force_key_posterior(M& model, std::span<const int> observations,
                                            std::span<const std::uint8_t> plaintext, AttackKind attack) {
  detail::check_key_space(model);
  if (attack == AttackKind::known_plaintext)
    detail::require(plaintext.size() >= observations.size(), "brute_force_key_posterior: plaintext too short");
  const std::size_t nk = model.key_count();
  std::vector<double> post(nk, 1.0 / static_cast<double>(nk));
  KeyPosteriorCurve out;
  out.prior_entropy = entropy(post);
  model.reset();
  for (std::size_t n = 0; n < observations.size(); ++n) {
    model.advance();
    const int x = attack == AttackKind::known_plaintext ? plaintext[n] & 1 : 0;
    double total = 0.0;
    for (std::size_t k = 0; k < nk; ++k) total += post[k] *= detail::slot_likelihood(model, k, attack, x, observations[n]);
    if (total <= 0.0) throw NumericalError("brute_force_key_posterior: observation impossible under every key");
    for (auto& p : post) p /= total;
    out.entropy.push_back(entropy(post));
    if (!out.unicity_slots && out.entropy.back() <= kUnicityThreshold) out.unicity_slots = n + 1;
  }
  return out;
}

struct KeyEntropyEstimate {
  double prior_entropy = 0.0;
  std::vector<double> expected_entropy;     // estimate of H(K|Y^n) (or H(K|Y^n,X^n))
  std::vector<double> realization_entropy;  // posterior entropy of realization 0
  std::optional<std::size_t> unicity_slots;
  std::size_t realizations = 0;
};

/// H(K|Y^n) by a chained information-gain estimator.
///
/// R realizations (true key uniform, data from `plaintext`) run in lockstep.
/// At each slot the exact expected entropy drop over the next outcome is
/// computed for every realization's current posterior; the estimate falls by
/// the mean drop, which is nonnegative by concavity of entropy.
template <KeyedObservationModel M, class Rng>
KeyEntropyEstimate conditional_key_entropy(M& model, std::span<const std::uint8_t> plaintext, AttackKind attack,
                                           std::size_t realizations, Rng& rng) {
  detail::check_key_space(model);
  detail::require(realizations >= 1, "conditional_key_entropy: realizations must be >= 1");
  const std::size_t nk = model.key_count();
  const std::size_t ny = model.outcome_count();
  std::vector<std::vector<double>> post(realizations, std::vector<double>(nk, 1.0 / static_cast<double>(nk)));
  std::vector<std::size_t> truth(realizations);
  std::uniform_int_distribution<std::size_t> pick(0, nk - 1);
  for (auto& t : truth) t = pick(rng);

  KeyEntropyEstimate out;
  out.realizations = realizations;
  out.prior_entropy = entropy(post.front());
  double h = out.prior_entropy;
  std::vector<double> a(ny), b(ny), lik(nk * ny), row(ny);
  model.reset();
  for (std::size_t n = 0; n < plaintext.size(); ++n) {
    model.advance();
    const int x = plaintext[n] & 1;
    for (std::size_t k = 0; k < nk; ++k)
      for (std::size_t y = 0; y < ny; ++y)
        lik[k * ny + y] = detail::slot_likelihood(model, k, attack, x, static_cast<int>(y));
    double drop = 0.0;
    for (std::size_t r = 0; r < realizations; ++r) {
      auto& p = post[r];
      std::fill(a.begin(), a.end(), 0.0);
      std::fill(b.begin(), b.end(), 0.0);
      for (std::size_t k = 0; k < nk; ++k) {
        if (p[k] == 0.0) continue;
        for (std::size_t y = 0; y < ny; ++y) {
          const double q = p[k] * lik[k * ny + y];
          if (q > 0.0) {
            a[y] += q;
            b[y] += q * std::log2(q);
          }
        }
      }
      double expected = 0.0;
      for (std::size_t y = 0; y < ny; ++y)
        if (a[y] > 0.0) expected += a[y] * std::log2(a[y]) - b[y];
      drop += std::max(0.0, entropy(p) - expected);

      const int sx = model.state(truth[r], x);
      for (std::size_t y = 0; y < ny; ++y) row[y] = model.outcome_probability(sx, static_cast<int>(y));
      const auto y_obs = static_cast<std::size_t>(detail::sample_index(row, rng));
      double total = 0.0;
      for (std::size_t k = 0; k < nk; ++k) total += p[k] *= lik[k * ny + y_obs];
      for (auto& v : p) v /= total;
    }
    h = std::max(0.0, h - drop / static_cast<double>(realizations));
    out.expected_entropy.push_back(h);
    out.realization_entropy.push_back(entropy(post.front()));
    if (!out.unicity_slots && h <= kUnicityThreshold) out.unicity_slots = n + 1;
  }
  return out;
}

struct EquivocationEstimate {
  double h_x = 0.0;
  double h_x_given_y = 0.0;
  double h_k_given_y = 0.0;
  std::size_t slots = 0;
  std::size_t realizations = 0;
  std::size_t inner_samples = 0;
};

/// H(X^n|Y^n) for uniform i.i.d. plaintext bits, via
/// H(X|Y) = H(K|Y) + H(X|K,Y) − H(K|X,Y).
///
/// H(X|K,Y) factorizes over slots given the key; H(K|X,Y) is averaged over
/// plaintexts drawn from P(X|Y) by sampling a key from P(K|Y).
template <KeyedObservationModel M, class Rng>
EquivocationEstimate plaintext_equivocation(M& model, std::size_t slots, std::size_t realizations,
                                            std::size_t inner_samples, Rng& rng) {
  detail::check_key_space(model);
  detail::require(slots >= 1 && realizations >= 1 && inner_samples >= 1,
                  "plaintext_equivocation: slots, realizations and samples must be >= 1");
  const std::size_t nk = model.key_count();
  std::vector<int> states(slots * nk * 2);
  model.reset();
  for (std::size_t n = 0; n < slots; ++n) {
    model.advance();
    for (std::size_t k = 0; k < nk; ++k)
      for (int x = 0; x < 2; ++x) states[(n * nk + k) * 2 + static_cast<std::size_t>(x)] = model.state(k, x);
  }
  auto st = [&](std::size_t n, std::size_t k, int x) { return states[(n * nk + k) * 2 + static_cast<std::size_t>(x)]; };
  auto safe_log = [](double v) { return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity(); };

  EquivocationEstimate out;
  out.h_x = static_cast<double>(slots);
  out.slots = slots;
  out.realizations = realizations;
  out.inner_samples = inner_samples;
  std::uniform_int_distribution<std::size_t> pick(0, nk - 1);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> lw(nk), row(model.outcome_count());
  std::vector<int> y(slots);
  std::vector<std::uint8_t> x(slots);

  for (std::size_t r = 0; r < realizations; ++r) {
    const std::size_t truth = pick(rng);
    for (std::size_t n = 0; n < slots; ++n) {
      const int s = st(n, truth, coin(rng) ? 1 : 0);
      for (std::size_t o = 0; o < row.size(); ++o) row[o] = model.outcome_probability(s, static_cast<int>(o));
      y[n] = detail::sample_index(row, rng);
    }

    for (std::size_t k = 0; k < nk; ++k) {
      double v = 0.0;
      for (std::size_t n = 0; n < slots; ++n)
        v += safe_log(0.5 * (model.outcome_probability(st(n, k, 0), y[n]) + model.outcome_probability(st(n, k, 1), y[n])));
      lw[k] = v;
    }
    detail::normalize_log(lw);
    const std::vector<double> post_k = lw;
    const double h_k = entropy(post_k);

    double h_x_given_k = 0.0;
    for (std::size_t k = 0; k < nk; ++k) {
      if (post_k[k] == 0.0) continue;
      double hk = 0.0;
      for (std::size_t n = 0; n < slots; ++n) {
        const double l0 = model.outcome_probability(st(n, k, 0), y[n]);
        const double l1 = model.outcome_probability(st(n, k, 1), y[n]);
        if (l0 + l1 > 0.0) hk += binary_entropy(l0 / (l0 + l1));
      }
      h_x_given_k += post_k[k] * hk;
    }

    double h_k_given_xy = 0.0;
    for (std::size_t s = 0; s < inner_samples; ++s) {
      const auto k = static_cast<std::size_t>(detail::sample_index(post_k, rng));
      for (std::size_t n = 0; n < slots; ++n) {
        const double l0 = model.outcome_probability(st(n, k, 0), y[n]);
        const double l1 = model.outcome_probability(st(n, k, 1), y[n]);
        x[n] = std::bernoulli_distribution(l1 / (l0 + l1))(rng) ? 1 : 0;
      }
      for (std::size_t kk = 0; kk < nk; ++kk) {
        double v = 0.0;
        for (std::size_t n = 0; n < slots; ++n) v += safe_log(model.outcome_probability(st(n, kk, x[n]), y[n]));
        lw[kk] = v;
      }
      detail::normalize_log(lw);
      h_k_given_xy += entropy(lw);
    }
    h_k_given_xy /= static_cast<double>(inner_samples);

    out.h_k_given_y += h_k;
    out.h_x_given_y += h_k + h_x_given_k - h_k_given_xy;
  }
  out.h_k_given_y /= static_cast<double>(realizations);
  out.h_x_given_y = std::clamp(out.h_x_given_y / static_cast<double>(realizations), 0.0, out.h_x);
  return out;
}

}  // namespace qcipher
