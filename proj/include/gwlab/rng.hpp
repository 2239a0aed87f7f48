#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace gwlab {

/// Identifier written into run manifests. Bump the suffix if any sampling
/// routine below changes its output for a given seed.
inline constexpr std::string_view kRngAlgorithmId = "xoshiro256starstar+splitmix64/v1";

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` derived from `base`. Used both for replication
/// seeds (base_seed, run_index) and for the per-purpose sub-streams inside a
/// single realization.
inline constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t s = base;
  const std::uint64_t a = splitmix64_next(s);
  std::uint64_t t = a ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
  return splitmix64_next(t);
}

/// xoshiro256** by Blackman and Vigna, seeded through SplitMix64.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64_next(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open01() { return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52; }

  /// Exponential with mean 1.
  double exponential() { return -std::log(uniform_open01()); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4]{};
};

}  // namespace gwlab
