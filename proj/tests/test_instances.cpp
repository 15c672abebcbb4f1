#include <cmath>

#include "doctest.h"
#include "rpcone/errors.hpp"
#include "rpcone/instances.hpp"

using namespace rpcone;

namespace {

GenSpec psd_spec(int side, int m, std::uint64_t seed) {
  GenSpec g;
  g.cone = ConeSpec::psd(side);
  g.m = m;
  g.seed = seed;
  return g;
}

}  // namespace

TEST_SUITE("instances") {
  TEST_CASE("feasible witness") {
    for (const ConeSpec& cone : {ConeSpec::psd(7), ConeSpec::orthant(9), ConeSpec::lorentz(6),
                                 ConeSpec({{BlockKind::kPsd, 3}, {BlockKind::kLorentz, 4}, {BlockKind::kOrthant, 2}})}) {
      for (CostKind cost : {CostKind::kIdentity, CostKind::kRandom}) {
        GenSpec g;
        g.cone = cone;
        g.m = 15;
        g.cost_kind = cost;
        g.seed = 3;
        const FeasibleInstance inst = generate_feasible(g);
        const ConicProgram& p = inst.program;
        CHECK((p.apply(inst.witness) - p.rhs()).norm() <= 1e-12 * (1.0 + p.rhs().norm()));
        CHECK(lambda_min(inst.witness) > 0.0);
        CHECK(trace(inst.witness) <= p.trace_bound());
        CHECK(p.trace_bound() == doctest::Approx(g.theta_factor * trace(inst.witness)));
        CHECK(trace(inst.witness) == doctest::Approx(cone.degree()));
        if (cost == CostKind::kIdentity) CHECK(p.cost().coords() == identity_element(cone).coords());
      }
    }
  }

  TEST_CASE("generation is deterministic") {
    const FeasibleInstance a = generate_feasible(psd_spec(6, 20, 11));
    const FeasibleInstance b = generate_feasible(psd_spec(6, 20, 11));
    CHECK(a.program.constraint_coords() == b.program.constraint_coords());
    CHECK(a.program.rhs() == b.program.rhs());
    CHECK(a.witness.coords() == b.witness.coords());
    CHECK(a.program.rhs() != generate_feasible(psd_spec(6, 20, 12)).program.rhs());
  }

  TEST_CASE("constraint density") {
    for (double density : {0.1, 0.3, 0.75}) {
      GenSpec g = psd_spec(12, 10, 5);
      g.density = density;
      const ConicProgram p = generate_feasible(g).program;
      for (int i = 0; i < p.num_constraints(); ++i) {
        const double frac = static_cast<double>((p.constraint_coords().row(i).array() != 0.0).count()) / p.dim();
        CHECK(std::abs(frac - density) <= 0.05);
        CHECK((p.constraint_coords().row(i).array() >= 0.0).all());
      }
    }
    const AlgebraElement e = random_sparse_element(ConeSpec::psd(4), 0.5, 1);
    CHECK((e.coords().array() != 0.0).count() == 5);
  }

  TEST_CASE("triangular-number inversion of the vectorized dimension") {
    CHECK(psd_side_from_dim(1540) == 55);
    CHECK(psd_side_from_dim(1830) == 60);
  }

  TEST_CASE("planted certificates verify") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      GenSpec g = psd_spec(8, 30, seed);
      g.feasibility = Feasibility::kInfeasible;
      const InfeasibleInstance inst = generate_infeasible(g);
      CHECK(verify_certificate(inst.program, inst.certificate));
      CHECK(inst.certificate.normalization == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(inst.certificate.slack_lambda_max == doctest::Approx(-0.1).epsilon(1e-9));
      const AlgebraElement agg = inst.program.adjoint(inst.certificate.y_hat) -
                                 inst.certificate.nu_hat * identity_element(inst.program.spec());
      CHECK(std::abs(lambda_max(agg) + 0.1) <= 1e-10);
      CHECK((inst.certificate.y_hat.array() >= 0.0).all());
    }
  }

  TEST_CASE("solver confirms planted infeasibility") {
    int infeasible = 0;
    for (int k = 0; k < 20; ++k) {
      GenSpec g = psd_spec(3 + k % 5, 8 + k, 300 + k);
      if (k % 4 == 1) g.cone = ConeSpec({{BlockKind::kOrthant, 3}, {BlockKind::kLorentz, 3}, {BlockKind::kPsd, 3}});
      g.feasibility = Feasibility::kInfeasible;
      g.cost_kind = k % 2 ? CostKind::kRandom : CostKind::kIdentity;
      const InfeasibleInstance inst = generate_infeasible(g);
      const SolveResult r = solve(inst.program);
      if (r.status == SolveStatus::kPrimalInfeasible && verify_certificate(inst.program, *r.certificate)) ++infeasible;
    }
    CHECK(infeasible == 20);
  }

  TEST_CASE("parameter validation") {
    GenSpec g = psd_spec(4, 5, 0);
    g.margin = -0.1;
    CHECK_THROWS_AS(generate_infeasible(g), ParameterError);
    g = psd_spec(4, 5, 0);
    g.density = 0.0;
    CHECK_THROWS_AS(generate_feasible(g), ParameterError);
    g = psd_spec(4, 5, 0);
    g.theta_factor = 1.0;
    CHECK_THROWS_AS(generate_feasible(g), ParameterError);
    CHECK_THROWS_AS(cost_kind_from_string("diagonal"), ParameterError);
  }

  TEST_CASE("JSON round trips") {
    GenSpec g = psd_spec(9, 17, 123);
    g.cost_kind = CostKind::kRandom;
    g.feasibility = Feasibility::kInfeasible;
    g.margin = 0.05;
    const GenSpec back = gen_spec_from_json(gen_spec_to_json(g));
    CHECK(back.cone == g.cone);
    CHECK(back.m == 17);
    CHECK(back.seed == 123);
    CHECK(back.cost_kind == CostKind::kRandom);
    CHECK(back.feasibility == Feasibility::kInfeasible);
    CHECK(back.margin == 0.05);
    const GenSpec from_string = gen_spec_from_json({{"cone", "psd:5"}, {"m", 3}});
    CHECK(from_string.cone == ConeSpec::psd(5));
    CHECK(from_string.density == 0.1);

    const InfeasibleInstance inst = generate_infeasible(g);
    const Certificate c = certificate_from_json(certificate_to_json(inst.certificate));
    CHECK(c.y_hat == inst.certificate.y_hat);
    CHECK(c.nu_hat == inst.certificate.nu_hat);
    CHECK_THROWS_AS(certificate_from_json({{"nu_hat", 1.0}}), FormatError);
  }
}
