#pragma once

#include <cstdint>
#include <limits>

namespace rpcone {

/// SplitMix64: a counter-based 64-bit generator (Steele, Lea & Flood 2014).
///
/// Every random quantity in the library is drawn from this engine through the
/// helpers below, never through `std::*_distribution`, whose output is
/// implementation-defined. Independent streams are obtained with
/// `derive_seed(master, stream)`, so a parallel loop can give each iteration
/// its own generator and stay bit-reproducible for any thread count.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller; the spare variate is cached.
  double normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Seed for the `stream`-th independent substream of `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace rpcone
