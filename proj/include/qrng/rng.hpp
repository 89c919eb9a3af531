#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace qrng {

/// Identifier recorded in run metadata so output streams can be regenerated
/// by any implementation of the same generators.
inline constexpr const char* kRngAlgorithmId =
    "xoshiro256**1.0 seeded by splitmix64; exponential via inverse CDF";

/// splitmix64 step: advances `state` and returns the next output word.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Deterministic seed derivation: independent child streams are keyed by
/// (master seed, module label, stream index).
inline std::uint64_t child_seed(std::uint64_t master, std::string_view label,
                                std::uint64_t index) {
  std::uint64_t s = master ^ fnv1a64(label);
  std::uint64_t x1 = splitmix64_next(s);
  std::uint64_t s2 = x1 ^ (index * 0x9E3779B97F4A7C15ULL);
  return splitmix64_next(s2);
}

/// xoshiro256** 1.0. State is seeded from four consecutive splitmix64 outputs,
/// so every 64-bit seed (including 0) yields a valid non-zero state.
class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    for (auto& word : s_) word = splitmix64_next(seed);
  }

  std::uint64_t next() {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0,1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Exponential variate with the given mean, via inverse CDF on (0,1].
  double next_exponential(double mean) {
    const double u = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    return -std::log(u) * mean;
  }

  /// Uniform integer in [0, bound), unbiased (rejection sampling).
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// n reference bits (one per byte, values 0/1), MSB-first from consecutive
/// generator words. Used for seeded reference data in tests and analyses.
inline std::vector<std::uint8_t> random_bits(std::uint64_t seed, std::size_t n) {
  Xoshiro256ss rng(seed);
  std::vector<std::uint8_t> out(n);
  std::size_t i = 0;
  while (i < n) {
    const std::uint64_t w = rng.next();
    const std::size_t take = std::min<std::size_t>(64, n - i);
    for (std::size_t k = 0; k < take; ++k)
      out[i + k] = static_cast<std::uint8_t>((w >> (63 - k)) & 1U);
    i += take;
  }
  return out;
}

}  // namespace qrng
