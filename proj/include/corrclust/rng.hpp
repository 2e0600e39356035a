#pragma once

#include <cmath>
#include <cstdint>

namespace cc {

// Counter-based deterministic random generator.
//
// The i-th output is splitmix64_mix(key + i * PHI64), i.e. a stateless hash of
// the draw index, so streams are reproducible across platforms and compilers
// (pure 64-bit integer arithmetic, no libm in the integer path).  Independent
// streams are derived by hashing (seed, stream) into the key.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(derive(seed, stream)) {}

  /// Mixes (seed, stream) into a new 64-bit key; used to spawn sub-generators.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return mix(seed + kPhi64 * (mix(stream + kPhi64) | 1));
  }

  std::uint64_t next_u64() {
    counter_ += kPhi64;
    return mix(key_ + counter_);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound), unbiased (rejection sampling). bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
  }

  /// Standard normal via Box-Muller; consumes exactly two draws per call.
  double normal() {
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  static constexpr std::uint64_t kPhi64 = 0x9E3779B97F4A7C15ull;
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cc
