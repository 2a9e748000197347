#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace monge {

/// Deterministic stream RNG: xoshiro256++ seeded through splitmix64.
///
/// Each (seed, stream) pair yields an independent, reproducible sequence no
/// matter which thread consumes it, so experiment replicates can run in any
/// order or in parallel and still produce identical draws.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {
    std::uint64_t x = splitmix(seed);
    x = splitmix(x ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
    for (auto& s : state_) {
      x = splitmix(x);
      s = x;
    }
    // xoshiro must not start from the all-zero state
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t nextU64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double nextUniform() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; draws come in pairs, the spare is cached.
  double nextGaussian() {
    if (hasSpare_) {
      hasSpare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - nextUniform();  // (0, 1], keeps log() finite
    const double u2 = nextUniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    hasSpare_ = true;
    return r * std::cos(a);
  }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t nextBounded(std::uint64_t bound) {
    // Lemire multiply-shift; bias is O(bound / 2^64), irrelevant at our sizes.
    const unsigned __int128 m = static_cast<unsigned __int128>(nextU64()) * bound;
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_[4];
  bool hasSpare_ = false;
  double spare_ = 0.0;
};

}  // namespace monge
