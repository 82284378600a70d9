#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mmcmax {

/// SplitMix64 step (Steele/Lea/Vigna): advances `state` and returns the
/// next output. Used for seeding and for deriving replicate substreams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic per-replicate seed: replicate i of a run with
/// `master_seed` always draws from the same substream, independent of
/// scheduling or worker count.
inline std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed + 0x9E3779B97F4A7C15ull * (index + 1);
  return splitmix64_next(s);
}

/// xoshiro256++ 1.0 (Blackman/Vigna, public domain), state expanded from
/// a single 64-bit seed via SplitMix64. Fully specified here so streams
/// are bit-reproducible.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    for (auto& word : state_) word = splitmix64_next(seed);
  }

  std::uint64_t next() {
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

  /// Uniform on (0, 1]: 53 random bits, never exactly 0, so log() is safe.
  double uniform_unit() { return double((next() >> 11) + 1) * 0x1.0p-53; }

  /// Exponential variate with the given rate, by inversion.
  double exponential(double rate) { return -std::log(uniform_unit()) / rate; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace mmcmax
