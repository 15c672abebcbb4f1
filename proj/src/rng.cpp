#include "rpcone/rng.hpp"

#include <cmath>
#include <numbers>

namespace rpcone {

double SplitMix64::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // Two rounds of the SplitMix finalizer over (master, stream).
  SplitMix64 mix(master ^ (stream * 0xD1B54A32D192ED03ULL));
  mix();
  return mix() ^ stream;
}

}  // namespace rpcone
