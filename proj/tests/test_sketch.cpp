#include <cmath>

#include "doctest.h"
#include "rpcone/errors.hpp"
#include "rpcone/rng.hpp"
#include "rpcone/sketch.hpp"

using namespace rpcone;

namespace {

Eigen::VectorXd random_unit(int m, SplitMix64& rng) {
  Eigen::VectorXd x(m);
  for (int i = 0; i < m; ++i) x(i) = rng.normal();
  return x.normalized();
}

}  // namespace

TEST_SUITE("sketch") {
  TEST_CASE("embedding dimension formula") {
    // Frozen from tests/oracles/derive_values.py with c0 = 1.75.
    CHECK(embed_dimension(1000, 0.13, kDefaultC0) == 716);
    CHECK(embed_dimension(2000, 0.2, kDefaultC0) == 333);
    CHECK(embed_dimension(4000, 0.2, kDefaultC0) == 363);
    CHECK(embed_dimension(500, 0.13, kDefaultC0) == 500);
    CHECK(embed_dimension(500, 0.2, kDefaultC0) == 272);
    CHECK(embed_dimension(1000, 0.2, kDefaultC0) == 303);
  }

  TEST_CASE("published dimension triples are matched closely") {
    struct Triple {
      int m;
      double eps;
      int d;
    };
    for (const Triple& t : {Triple{1000, 0.13, 716}, Triple{2000, 0.2, 332}, Triple{4000, 0.2, 340}}) {
      const int d = embed_dimension(t.m, t.eps, kDefaultC0);
      CHECK(std::abs(d - t.d) <= 0.07 * t.d);
    }
  }

  TEST_CASE("embedding dimension monotonicity and errors") {
    for (int m = 10; m < 3000; m += 97) {
      CHECK(embed_dimension(m + 50, 0.3, 1.0) >= embed_dimension(m, 0.3, 1.0));
      CHECK(embed_dimension(m, 0.35, 1.0) <= embed_dimension(m, 0.3, 1.0));
      CHECK(embed_dimension(m, 0.3, 1.0) <= m);
    }
    CHECK_THROWS_AS(embed_dimension(100, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(embed_dimension(100, 1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(embed_dimension(100, 0.5, -1.0), ParameterError);
    CHECK_THROWS_AS(embed_dimension(1, 0.5, 1.0), ParameterError);
  }

  TEST_CASE("sparse sketch density and values") {
    const ProjectionSketch s = sample_rp(50, 500, SketchFamily::kAchlioptasSparse, 0.1, 17);
    CHECK(s.rows() == 50);
    CHECK(s.cols() == 500);
    const double frac = static_cast<double>((s.matrix.array() != 0.0).count()) / s.matrix.size();
    CHECK(frac >= 0.08);
    CHECK(frac <= 0.12);
    const double scale = 1.0 / std::sqrt(50 * 0.1);
    CHECK((s.matrix.array().abs() == scale || s.matrix.array() == 0.0).all());
    CHECK_THROWS_AS(sample_rp(0, 10, SketchFamily::kGaussian, 1.0, 1), ParameterError);
    CHECK_THROWS_AS(sample_rp(11, 10, SketchFamily::kGaussian, 1.0, 1), ParameterError);
  }

  TEST_CASE("sketches are deterministic in the seed") {
    for (SketchFamily f : {SketchFamily::kAchlioptasSparse, SketchFamily::kGaussian}) {
      CHECK(sample_rp(20, 100, f, 0.1, 5).matrix == sample_rp(20, 100, f, 0.1, 5).matrix);
      CHECK(sample_rp(20, 100, f, 0.1, 5).matrix != sample_rp(20, 100, f, 0.1, 6).matrix);
    }
  }

  TEST_CASE("isometry in expectation") {
    SplitMix64 rng(3);
    const Eigen::VectorXd x = random_unit(200, rng);
    for (SketchFamily f : {SketchFamily::kAchlioptasSparse, SketchFamily::kGaussian}) {
      double sum = 0.0;
      for (int k = 0; k < 1000; ++k) sum += (sample_rp(20, 200, f, 0.1, 1000 + k).matrix * x).squaredNorm();
      const double mean = sum / 1000.0;
      CHECK(mean >= 0.95);
      CHECK(mean <= 1.05);
    }
  }

  TEST_CASE("make_sketch chooses d and records parameters") {
    SketchParams params;
    params.epsilon = 0.2;
    params.seed = 9;
    const ProjectionSketch s = make_sketch(1000, params);
    CHECK(s.rows() == 303);
    CHECK(s.epsilon == 0.2);
    CHECK(s.c0 == kDefaultC0);
    params.d_override = 40;
    CHECK(make_sketch(1000, params).rows() == 40);
    params.identity = true;
    CHECK_THROWS_AS(make_sketch(1000, params), ParameterError);
    params.d_override.reset();
    const ProjectionSketch id = make_sketch(30, params);
    CHECK(id.identity);
    CHECK(id.matrix == Eigen::MatrixXd::Identity(30, 30));
  }

  TEST_CASE("norm preservation") {
    const ProjectionSketch s = sample_rp(embed_dimension(1000, 0.2, kDefaultC0), 1000,
                                         SketchFamily::kAchlioptasSparse, 0.1, 77);
    SplitMix64 rng(4);
    Eigen::MatrixXd pts(1000, 1000);
    for (int j = 0; j < 1000; ++j) pts.col(j) = random_unit(1000, rng);
    // About 1.4% of points leave the band at d = 303.
    CHECK(check_norm_preservation(s.matrix, pts, 0.2) >= 0.97);
    CHECK(check_norm_preservation(s.matrix, pts, 0.4) >= 0.999);
    CHECK(check_norm_preservation(s.matrix, pts, 0.999999) == 1.0);
    CHECK(check_norm_preservation(s.matrix, Eigen::MatrixXd::Zero(1000, 3), 0.01) == 1.0);
    CHECK_THROWS_AS(check_norm_preservation(s.matrix, Eigen::MatrixXd::Zero(10, 3), 0.1), StructuralError);
  }

  TEST_CASE("Gram residual and scalar products, trivial cases") {
    const ProjectionSketch s = sample_rp(30, 100, SketchFamily::kAchlioptasSparse, 0.1, 1);
    SplitMix64 rng(5);
    const Eigen::VectorXd x = random_unit(100, rng);
    CHECK(check_gram_residual(s.matrix, Eigen::VectorXd::Zero(100), 0.01));
    CHECK(check_gram_residual(Eigen::MatrixXd::Identity(100, 100), x, 1e-12));
    CHECK(check_scalar_product(s.matrix, x, Eigen::VectorXd::Zero(100), 0.01));
    CHECK(check_scalar_product(s.matrix, x, x, 0.3) ==
          (check_norm_preservation(s.matrix, x, 0.3) == 1.0));
  }

  TEST_CASE("scalar products of orthogonal pairs") {
    const int m = 1000;
    const int d = embed_dimension(m, 0.2, kDefaultC0);
    SplitMix64 rng(6);
    int pass = 0;
    for (int t = 0; t < 100; ++t) {
      const ProjectionSketch s = sample_rp(d, m, SketchFamily::kAchlioptasSparse, 0.1, 500 + t);
      const Eigen::VectorXd x = random_unit(m, rng);
      Eigen::VectorXd y = random_unit(m, rng);
      y = (y - y.dot(x) * x).normalized();
      if (check_scalar_product(s.matrix, x, y, 0.2)) ++pass;
    }
    CHECK(pass >= 95);
  }

  TEST_CASE("sketch JSON") {
    const ProjectionSketch s = sample_rp(3, 5, SketchFamily::kGaussian, 1.0, 2);
    const nlohmann::json meta = sketch_to_json(s, false);
    CHECK(meta.at("family") == "gaussian");
    CHECK(meta.at("d") == 3);
    CHECK_FALSE(meta.contains("matrix"));
    const nlohmann::json full = sketch_to_json(s, true);
    CHECK(full.at("matrix").size() == 3);
    CHECK(full.at("matrix")[1][2].get<double>() == s.matrix(1, 2));
    CHECK(sketch_family_from_string("achlioptas") == SketchFamily::kAchlioptasSparse);
    CHECK_THROWS_AS(sketch_family_from_string("fourier"), ParameterError);
  }
}
