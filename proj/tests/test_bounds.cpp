#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rpcone/bounds.hpp"
#include "rpcone/errors.hpp"
#include "rpcone/instances.hpp"
#include "support.hpp"

using namespace rpcone;

TEST_SUITE("bounds") {
  TEST_CASE("operator norm bound examples") {
    Eigen::Matrix2d d;
    d << 2, 0, 0, -3;
    const ConicProgram p(ConeSpec::psd(2), svec(d).transpose(), Eigen::VectorXd::Ones(1),
                         svec(Eigen::Matrix2d::Identity()), 1.0);
    CHECK(opnorm_bound(p) == doctest::Approx(3.0));
    const ConicProgram id(ConeSpec::psd(3), svec(Eigen::Matrix3d::Identity()).transpose(), Eigen::VectorXd::Ones(1),
                          svec(Eigen::Matrix3d::Identity()), 1.0);
    CHECK(opnorm_bound(id) == doctest::Approx(1.0));
  }

  TEST_CASE("operator norm bound dominates and grows with constraints") {
    SplitMix64 rng(41);
    GenSpec g;
    g.cone = ConeSpec({{BlockKind::kPsd, 4}, {BlockKind::kLorentz, 3}});
    g.m = 12;
    g.density = 0.5;
    const ConicProgram p = generate_feasible(g).program;
    const double bound = opnorm_bound(p);
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd y(p.num_constraints());
      for (int i = 0; i < y.size(); ++i) y(i) = rng.uniform(-1.0, 1.0);
      y /= y.lpNorm<Eigen::Infinity>();
      CHECK(spectral_radius(p.adjoint(y)) <= bound + 1e-12);
    }
    const ConicProgram fewer(p.spec(), p.constraint_coords().topRows(6), p.rhs().head(6), p.cost().coords(),
                             p.trace_bound());
    CHECK(opnorm_bound(fewer) <= bound);
  }

  TEST_CASE("width of a singleton is zero") {
    const WidthEstimate w = estimate_gaussian_width(3, finite_set_sup(Eigen::Vector3d(1, -2, 0.5)), 400, 1);
    // Every draw is g.x0, so only the sampling mean of a centred normal remains.
    CHECK(std::abs(w.estimate) <= 3.0 * w.std_error);
    const WidthEstimate shifted = estimate_gaussian_width(
        3, finite_set_sup(Eigen::MatrixXd::Zero(3, 1)), 400, 1);
    CHECK(shifted.estimate == 0.0);
    CHECK(shifted.std_error == 0.0);
  }

  TEST_CASE("width of the unit disc") {
    const WidthEstimate w = estimate_gaussian_width(2, euclidean_ball_sup(), 20000, 3);
    CHECK(std::abs(w.estimate - 1.2533141373155001) <= 3.0 * w.std_error);
    CHECK(w.draws == 20000);
    CHECK_THROWS_AS(estimate_gaussian_width(2, euclidean_ball_sup(), 99, 3), ParameterError);
  }

  TEST_CASE("standard error shrinks with the square root of the draws") {
    const SupremumFn sup = euclidean_ball_sup();
    const WidthEstimate a = estimate_gaussian_width(5, sup, 4000, 8);
    const WidthEstimate b = estimate_gaussian_width(5, sup, 8000, 8);
    const double ratio = b.std_error / a.std_error;
    CHECK(ratio == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(0.2));
  }

  TEST_CASE("orthant slice width against the finite-set bound") {
    const int n = 30;
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(n, n + 1);
    pts.rightCols(n) = Eigen::MatrixXd::Identity(n, n);
    const ConeSpec spec = ConeSpec::orthant(n);
    const WidthEstimate w_cone = estimate_gaussian_width(n, cone_unit_ball_sup(spec), 500, 4);
    const WidthEstimate w_set = estimate_gaussian_width(n, finite_set_sup(pts), 500, 4);
    CHECK(w_cone.estimate == doctest::Approx(w_set.estimate).epsilon(1e-12));
    CHECK(w_cone.estimate <= kDefaultCTilde * std::sqrt(std::log(n + 1.0)) * finite_set_diameter(pts));
  }

  TEST_CASE("cone slice supremum for Lorentz and Psd blocks") {
    SplitMix64 rng(5);
    const ConeSpec l = ConeSpec::lorentz(4);
    const Eigen::Vector4d g(0.3, 1.0, -2.0, 0.5);
    // Extreme points (1/2)(1, u) with |u| = 1.
    const double expected = 0.5 * (g(0) + g.tail(3).norm());
    CHECK(cone_unit_ball_sup(l)(g) == doctest::Approx(expected));
    const ConeSpec p = ConeSpec::psd(3);
    const AlgebraElement x = rpcone::testing::random_element(p, rng);
    CHECK(cone_unit_ball_sup(p)(x.coords()) == doctest::Approx(std::max(0.0, lambda_max(x))));
  }

  TEST_CASE("diameters of the cone slice") {
    // Frozen from tests/oracles/derive_values.py (brute force over extreme points).
    CHECK(cone_unit_diameter(ConeSpec::orthant(4)) == doctest::Approx(1.4142135623730951));
    CHECK(cone_unit_diameter(ConeSpec::orthant(1)) == doctest::Approx(1.0));
    CHECK(cone_unit_diameter(ConeSpec::psd(5)) == doctest::Approx(std::numbers::sqrt2));
    CHECK(cone_unit_diameter(ConeSpec::lorentz(3)) == doctest::Approx(1.0));
    CHECK(cone_unit_diameter(ConeSpec({{BlockKind::kOrthant, 2}, {BlockKind::kLorentz, 3}})) ==
          doctest::Approx(std::numbers::sqrt2));
    CHECK(cone_unit_diameter(ConeSpec({{BlockKind::kLorentz, 3}, {BlockKind::kLorentz, 3}})) ==
          doctest::Approx(1.0));
    Eigen::Matrix2d pts;
    pts << 0, 3, 0, 4;
    CHECK(finite_set_diameter(pts) == 5.0);
  }

  TEST_CASE("finite-set width bound on random sets") {
    SplitMix64 rng(6);
    for (int t = 0; t < 20; ++t) {
      const int dim = 2 + t % 7;
      const int size = 2 + (t * 13) % 40;
      Eigen::MatrixXd pts(dim, size);
      for (int i = 0; i < pts.size(); ++i) pts.data()[i] = rng.normal();
      const WidthEstimate w = estimate_gaussian_width(dim, finite_set_sup(pts), 200, t);
      CHECK(w.estimate <= kDefaultCTilde * std::sqrt(std::log(static_cast<double>(size))) * finite_set_diameter(pts));
    }
  }

  TEST_CASE("infeasibility condition") {
    const Eigen::Vector2d y(3, 4), b(0.5, 0);
    const InfeasibilityCondition c = eval_infeasibility_condition(0.1, y, b, 1.0);
    CHECK(c.lhs == doctest::Approx(0.1 * 5.0 * 1.5));
    CHECK(c.holds);
    CHECK_FALSE(c.degenerate);
    CHECK_FALSE(eval_infeasibility_condition(0.2, y, b, 1.0).holds);
    CHECK(eval_infeasibility_condition(0.0, y, b, 1.0).lhs == 0.0);
    const InfeasibilityCondition z = eval_infeasibility_condition(0.5, Eigen::Vector2d::Zero(), b, 1.0);
    CHECK(z.lhs == 0.0);
    CHECK(z.degenerate);
  }

  TEST_CASE("infeasibility condition on a generated instance") {
    GenSpec g;
    g.cone = ConeSpec::psd(5);
    g.m = 20;
    g.feasibility = Feasibility::kInfeasible;
    const InfeasibleInstance inst = generate_infeasible(g);
    const double opn = opnorm_bound(inst.program);
    double yy = 0.0, bb = 0.0;
    for (int i = 0; i < g.m; ++i) {
      yy += inst.certificate.y_hat(i) * inst.certificate.y_hat(i);
      bb += inst.program.rhs()(i) * inst.program.rhs()(i);
    }
    const double expected = 0.05 * std::sqrt(yy) * (std::sqrt(bb) + opn);
    CHECK(eval_infeasibility_condition(0.05, inst.certificate.y_hat, inst.program.rhs(), opn).lhs ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("evaluators vanish where they should") {
    const Eigen::Vector2d y(1, 2), b(3, 4);
    CHECK(eval_optimality_bound(0.0, y, 5.0, 2.0, b) == 0.0);
    CHECK(eval_optimality_bound(0.3, y, 0.0, 2.0, Eigen::Vector2d::Zero()) == 0.0);
    CHECK(eval_feasibility_error_bound(0.0, 2.0, 3.0, 1.0, 2.0, 1.4, 10, 1.0) == 0.0);
    CHECK(eval_feasibility_error_bound(0.3, 2.0, 3.0, 0.0, 0.0, 1.4, 10, 1.0) == 0.0);
    CHECK(eval_retrieval_cone_bound(0.7, 0.0, 2.0, 5.0, 1.0, 1.0, 2.0, 1.4, 10, 1.0) == 0.7);
    CHECK(eval_retrieval_objective_bound(0.0, 2.0, 5.0, 1.0, 1.0, 2.0, 1.4, 10, 1.0) == 0.0);
    CHECK(eval_retrieval_objective_bound(0.3, 2.0, 5.0, 0.0, 1.0, 2.0, 1.4, 10, 1.0) == 0.0);
    CHECK_THROWS_AS(eval_feasibility_error_bound(0.3, 2.0, 3.0, 1.0, -1.0, 1.4, 10, 1.0), ParameterError);
    CHECK_THROWS_AS(eval_feasibility_error_bound(0.3, 2.0, 3.0, 1.0, 1.0, 1.4, 1, 1.0), ParameterError);
  }

  TEST_CASE("cone and feasibility bounds agree algebraically") {
    const double eps = 0.3, theta = 4.0, w = 1.7, u = 2.0, delta = 1.41, c2 = 1.0, lambda1 = 0.9;
    const int n = 120;
    const double q_half = std::numbers::sqrt2;
    const double feas = eval_feasibility_error_bound(eps, theta, 1.0, w, u, delta, n, c2);
    const double cone = eval_retrieval_cone_bound(lambda1, eps, theta, 1.0, q_half, w, u, delta, n, c2);
    CHECK(std::abs(cone - (lambda1 - q_half * feas / theta * theta)) <= 1e-12);
    const double feas_d = eval_feasibility_error_bound(eps, theta, 1.0, w, u, delta, n, c2, BoundScaling::kSqrtD, 40);
    CHECK(feas_d == doctest::Approx(feas * std::sqrt(std::log(120.0)) / std::sqrt(40.0)));
  }

  TEST_CASE("theoretical entries are recomputable from the parameters") {
    ErrorReport r;
    auto& q = r.parameters;
    q.epsilon = 0.37;
    q.d = 44;
    q.m = 150;
    q.n = 78;
    q.theta = 12.5;
    q.w_b = 2.31;
    q.delta = std::numbers::sqrt2;
    q.kappa = 3.3;
    q.op_norm2 = 9.1;
    q.opnorm_bound = 41.0;
    q.norm_b = 7.7;
    q.norm_c = 2.2;
    q.norm_y_star = 0.8;
    q.norm_q_half = 1.0;
    q.lambda1_xt = 0.01;
    fill_theoretical(r);
    const auto& t = r.theoretical;
    CHECK(t.optimality_gap_bound == eval_optimality_bound(0.37, Eigen::VectorXd::Constant(1, 0.8), 12.5, 41.0,
                                                          Eigen::VectorXd::Constant(1, 7.7)));
    CHECK(t.feasibility_error_bound ==
          eval_feasibility_error_bound(0.37, 12.5, 9.1, 2.31, q.u, q.delta, 78, q.c2));
    CHECK(t.retrieval_cone_bound ==
          eval_retrieval_cone_bound(0.01, 0.37, 12.5, 3.3, 1.0, 2.31, q.u, q.delta, 78, q.c2));
    CHECK(t.retrieval_objective_bound ==
          eval_retrieval_objective_bound(0.37, 12.5, 3.3, 2.2, 2.31, q.u, q.delta, 78, q.c2));
    CHECK(t.feasibility_error_bound_sqrt_d ==
          eval_feasibility_error_bound(0.37, 12.5, 9.1, 2.31, q.u, q.delta, 78, q.c2, BoundScaling::kSqrtD, 44));
    CHECK(std::isnan(t.infeasibility_lhs));

    const ErrorReport back = report_from_json(report_to_json(r));
    ErrorReport again = back;
    fill_theoretical(again);
    CHECK(again.theoretical.feasibility_error_bound == t.feasibility_error_bound);
    CHECK(again.theoretical.retrieval_cone_bound == t.retrieval_cone_bound);
    CHECK(back.parameters.kappa == 3.3);
    CHECK(std::isnan(back.measured.value_p));
    CHECK(report_to_json(r)["measured"]["value_P"].is_null());
  }
}
