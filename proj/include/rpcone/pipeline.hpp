#pragma once
// Constraint aggregation with a random projection, dual lifting and retrieval
// of a solution of the original equalities.
#include <Eigen/Dense>
#include <string>

#include "json.hpp"
#include "rpcone/program.hpp"
#include "rpcone/sketch.hpp"

namespace rpcone {

struct ProjectedProgram {
  /// d constraints Abar_k = sum_i T_ki A_i with right-hand side T b; same cone,
  /// cost and trace bound as the source.
  ConicProgram program;
  ProjectionSketch sketch;
  std::string source_id;
};

ProjectedProgram project_program(const ConicProgram& p, const ProjectionSketch& sketch,
                                 std::string source_id = {});

struct LiftedDual {
  Eigen::VectorXd y;
  double nu = 0.0;
};

/// (T'z, nu).
LiftedDual lift_dual(const Eigen::MatrixXd& t, const Eigen::VectorXd& z, double nu);

/// Dual of the projected program with right-hand side c + mu e.
DualProgram build_relaxed_dual(const ProjectedProgram& pt, double mu);

struct RetrievedSolution {
  AlgebraElement x_tilde;
  /// ||A x_T - b||_2.
  double residual_before = 0.0;
  /// ||A x_tilde - b||_2.
  double residual_after = 0.0;
  double lambda_min_after = 0.0;
  /// |<c, x_tilde> - <c, x_T>| when a cost is supplied.
  double objective_shift = 0.0;
  /// Set when A has numerical rank below its row count.
  bool rank_deficient = false;
};

/// x_tilde = x_T + A^+ (b - A x_T), the coordinate-wise Euclidean nearest point
/// of {A x = b}. The cone constraint is not re-imposed.
RetrievedSolution retrieve_solution(const AlgebraElement& x_t, const LinearOperator& op,
                                    const Eigen::VectorXd& b);
RetrievedSolution retrieve_solution(const AlgebraElement& x_t, const LinearOperator& op,
                                    const Eigen::VectorXd& b, const AlgebraElement& cost);

/// Native program JSON with a "sketch" object (metadata only) and "source".
nlohmann::json projected_to_json(const ProjectedProgram& pt);

}  // namespace rpcone
