#include "doctest.h"
#include "rpcone/rng.hpp"

#include <cmath>

TEST_SUITE("rng") {
  TEST_CASE("same seed gives the same stream") {
    rpcone::SplitMix64 a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a() == b());
  }

  TEST_CASE("uniform lies in [0, 1) and has mean near 1/2") {
    rpcone::SplitMix64 rng(1);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double u = rng.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
  }

  TEST_CASE("normal has unit variance") {
    rpcone::SplitMix64 rng(2);
    double s1 = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double z = rng.normal();
      s1 += z;
      s2 += z * z;
    }
    CHECK(std::abs(s1 / n) < 0.01);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  }

  TEST_CASE("derived streams differ") {
    CHECK(rpcone::derive_seed(7, 0) != rpcone::derive_seed(7, 1));
    CHECK(rpcone::derive_seed(7, 0) != rpcone::derive_seed(8, 0));
    CHECK(rpcone::derive_seed(7, 3) == rpcone::derive_seed(7, 3));
  }
}
