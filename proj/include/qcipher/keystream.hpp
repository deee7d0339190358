// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file keystream.hpp
 * @brief Secret keys, Fibonacci LFSR running keys and their chunking.
 *
 * Stream layout per slot: log2(M) basis bits (big-endian) followed by one OSK
 * bit when overlap selection keying is enabled.
 */

#pragma once

#include <bit>
#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qcipher/errors.hpp"

namespace qcipher {

inline bool is_power_of_two(long long v) noexcept { return v > 0 && (v & (v - 1)) == 0; }

inline int log2_exact(long long v) {
  detail::require(is_power_of_two(v), "value " + std::to_string(v) + " must be a power of two");
  return std::countr_zero(static_cast<unsigned long long>(v));
}

/// Key bits, most significant (first transmitted) bit first.
class SecretKey {
 public:
  explicit SecretKey(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    detail::require(!bits_.empty(), "SecretKey: key must have at least one bit");
    for (auto b : bits_) detail::require(b <= 1, "SecretKey: bits must be 0 or 1");
  }

  /// Lowercase or uppercase hex, 4 bits per digit, first digit most significant.
  static SecretKey from_hex(std::string_view hex) {
    detail::require(!hex.empty(), "SecretKey: empty hex string");
    std::vector<std::uint8_t> bits;
    bits.reserve(hex.size() * 4);
    for (char ch : hex) {
      int v = -1;
      if (ch >= '0' && ch <= '9') v = ch - '0';
      else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
      detail::require(v >= 0, std::string("SecretKey: bad hex digit '") + ch + "'");
      for (int i = 3; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((v >> i) & 1));
    }
    return SecretKey(std::move(bits));
  }

  /// Key of `bits` bits holding `value` big-endian.
  static SecretKey from_integer(std::uint64_t value, int bits) {
    detail::require(bits >= 1 && bits <= 64, "SecretKey::from_integer: 1..64 bits");
    std::vector<std::uint8_t> out(static_cast<std::size_t>(bits));
    for (int i = 0; i < bits; ++i) out[static_cast<std::size_t>(i)] = (value >> (bits - 1 - i)) & 1U;
    return SecretKey(std::move(out));
  }

  /// Lowercase hex; a trailing partial nibble is zero-padded on the right.
  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < bits_.size(); i += 4) {
      int v = 0;
      for (std::size_t k = 0; k < 4; ++k) v = (v << 1) | (i + k < bits_.size() ? bits_[i + k] : 0);
      out.push_back(digits[v]);
    }
    return out;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Feedback polynomial of a Fibonacci LFSR; tap t reads register bit L−t.
struct LfsrSpec {
  int register_length = 16;
  std::vector<int> taps{16, 15, 13, 4};
  /// Extra tap sets a long key may select (index 1.. after `taps`).
  std::vector<std::vector<int>> alternate_taps{};

  void validate() const {
    detail::require(register_length >= 2 && register_length <= 64,
                    "LfsrSpec: register_length must be in [2, 64]");
    auto check = [&](const std::vector<int>& t) {
      detail::require(!t.empty(), "LfsrSpec: taps must be non-empty");
      for (int tap : t)
        detail::require(tap >= 1 && tap <= register_length,
                        "LfsrSpec: tap " + std::to_string(tap) + " outside [1, register_length]");
    };
    check(taps);
    for (const auto& t : alternate_taps) check(t);
  }

  /// Default 16-bit register with the three other maximal tap sets registered.
  static LfsrSpec standard16() {
    return LfsrSpec{16, {16, 15, 13, 4}, {{16, 14, 13, 11}, {16, 15, 12, 10}, {16, 12, 3, 1}}};
  }

  friend bool operator==(const LfsrSpec&, const LfsrSpec&) = default;
};

/// Fibonacci LFSR. The output bit is the register LSB before each shift.
class Lfsr {
 public:
  Lfsr(int length, std::vector<int> taps, std::uint64_t seed)
      : length_(length), seed_(seed), state_(seed) {
    LfsrSpec{length, taps, {}}.validate();
    mask_ = length == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << length) - 1);
    detail::require((seed & ~mask_) == 0, "Lfsr: seed wider than the register");
    detail::require(seed != 0, "Lfsr: all-zero seed is a fixed point");
    for (int t : taps) feedback_ |= std::uint64_t{1} << (length - t);
  }

  int next_bit() noexcept {
    const int out = static_cast<int>(state_ & 1U);
    const std::uint64_t fb = static_cast<std::uint64_t>(std::popcount(state_ & feedback_) & 1);
    state_ = (state_ >> 1) | (fb << (length_ - 1));
    return out;
  }

  std::uint64_t state() const noexcept { return state_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int length() const noexcept { return length_; }

 private:
  int length_;
  std::uint64_t seed_;
  std::uint64_t state_;
  std::uint64_t mask_ = 0;
  std::uint64_t feedback_ = 0;
};

/// Number of steps until the register returns to its seed.
inline std::uint64_t lfsr_period(int length, const std::vector<int>& taps, std::uint64_t seed = 1) {
  Lfsr l(length, taps, seed);
  std::uint64_t n = 0;
  do {
    l.next_bit();
    ++n;
  } while (l.state() != seed);
  return n;
}

/// True when the polynomial has period 2^L − 1 (checked by enumeration, L ≤ 24).
inline bool is_maximal_length(int length, const std::vector<int>& taps) {
  detail::require(length <= 24, "is_maximal_length: enumeration limited to L <= 24");
  return lfsr_period(length, taps) == (std::uint64_t{1} << length) - 1;
}

/// Installs a key: the first L key bits fill register bits 0..L−1 (bit 0 is
/// emitted first). A key shorter than the register is followed by a single 1
/// and zeros; key bits beyond L pick a tap set (spec taps, then alternates).
inline Lfsr install_key(const LfsrSpec& spec, const SecretKey& key) {
  spec.validate();
  const auto L = static_cast<std::size_t>(spec.register_length);
  std::uint64_t seed = 0;
  for (std::size_t i = 0; i < std::min(L, key.size()); ++i)
    seed |= static_cast<std::uint64_t>(key[i]) << i;
  if (key.size() < L) seed |= std::uint64_t{1} << key.size();
  detail::require(seed != 0, "install_key: all-zero seed rejected");

  std::size_t choice = 0;
  if (key.size() > L && !spec.alternate_taps.empty()) {
    std::uint64_t extra = 0;
    for (std::size_t i = L; i < key.size(); ++i) extra = (extra << 1) | key[i];
    choice = static_cast<std::size_t>(extra % (spec.alternate_taps.size() + 1));
  }
  const auto& taps = choice == 0 ? spec.taps : spec.alternate_taps[choice - 1];
  return Lfsr(spec.register_length, taps, seed);
}

template <class G>
concept BitGenerator = requires(G g) {
  { g.next_bit() } -> std::convertible_to<int>;
};

/// Sequential running-key cursor over a bit generator.
template <BitGenerator G>
class ChunkedStream {
 public:
  explicit ChunkedStream(G generator) : gen_(std::move(generator)) {}

  int next_bit() {
    ++consumed_;
    return gen_.next_bit();
  }

  /// Consumes log2(m_values) bits, first bit most significant.
  std::uint64_t next_running_key(long long m_values) {
    const int width = log2_exact(m_values);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(next_bit());
    return v;
  }

  /// One OSK bit, or 0 without consuming anything when OSK is off.
  int osk_bit(bool enabled) { return enabled ? next_bit() : 0; }

  std::uint64_t bits_consumed() const noexcept { return consumed_; }
  const G& generator() const noexcept { return gen_; }

 private:
  G gen_;
  std::uint64_t consumed_ = 0;
};

using RunningKeyStream = ChunkedStream<Lfsr>;

inline RunningKeyStream make_running_key_stream(const LfsrSpec& spec, const SecretKey& key) {
  return RunningKeyStream(install_key(spec, key));
}

/// Either the host entropy device or a seeded generator (reproducible mode).
struct EntropySource {
  std::optional<std::uint64_t> seed;

  static EntropySource host() { return {}; }
  static EntropySource reproducible(std::uint64_t s) { return EntropySource{s}; }
};

inline SecretKey true_random_key(int bits, const EntropySource& source) {
  detail::require(bits >= 1, "true_random_key: bits must be >= 1");
  std::vector<std::uint8_t> out(static_cast<std::size_t>(bits));
  if (source.seed) {
    std::mt19937_64 gen(*source.seed);
    for (auto& b : out) b = static_cast<std::uint8_t>(gen() >> 63);
  } else {
    try {
      std::random_device rd;
      for (std::size_t i = 0; i < out.size(); i += 32) {
        const std::uint32_t word = rd();
        for (std::size_t k = 0; k < 32 && i + k < out.size(); ++k)
          out[i + k] = static_cast<std::uint8_t>((word >> k) & 1U);
      }
    } catch (const std::exception& e) {
      throw EntropyError(std::string("true_random_key: entropy source unavailable: ") + e.what());
    }
  }
  return SecretKey(std::move(out));
}

}  // namespace qcipher
