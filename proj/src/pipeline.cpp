#include "rpcone/pipeline.hpp"

#include "rpcone/errors.hpp"
#include "rpcone/io.hpp"
#include "rpcone/kernels.hpp"

namespace rpcone {

ProjectedProgram project_program(const ConicProgram& p, const ProjectionSketch& sketch,
                                 std::string source_id) {
  if (sketch.cols() != p.num_constraints())
    throw StructuralError("sketch has " + std::to_string(sketch.cols()) + " columns, program has " +
                          std::to_string(p.num_constraints()) + " constraints");
  Eigen::MatrixXd rows = kernels::omp::aggregate_rows(sketch.matrix, p.constraint_coords());
  Eigen::VectorXd rhs = sketch.matrix * p.rhs();
  ProjectedProgram out{ConicProgram(p.spec(), std::move(rows), std::move(rhs), p.cost().coords(),
                                    p.trace_bound()),
                       sketch, std::move(source_id)};
  return out;
}

LiftedDual lift_dual(const Eigen::MatrixXd& t, const Eigen::VectorXd& z, double nu) {
  if (z.size() != t.rows()) throw StructuralError("dual vector length must equal the sketch rows");
  return {t.transpose() * z, nu};
}

DualProgram build_relaxed_dual(const ProjectedProgram& pt, double mu) {
  return DualProgram(pt.program, mu);
}

RetrievedSolution retrieve_solution(const AlgebraElement& x_t, const LinearOperator& op,
                                    const Eigen::VectorXd& b) {
  if (x_t.dim() != op.cols() || b.size() != op.rows())
    throw StructuralError("retrieve_solution: dimensions do not match the operator");
  const Eigen::VectorXd residual = b - op.apply(x_t.coords());
  Eigen::VectorXd coords = x_t.coords() + op.pinv_apply(residual);
  RetrievedSolution out;
  out.residual_before = residual.norm();
  out.residual_after = (op.apply(coords) - b).norm();
  out.x_tilde = AlgebraElement(x_t.spec(), std::move(coords));
  out.lambda_min_after = lambda_min(out.x_tilde);
  out.rank_deficient = !op.full_row_rank();
  return out;
}

RetrievedSolution retrieve_solution(const AlgebraElement& x_t, const LinearOperator& op,
                                    const Eigen::VectorXd& b, const AlgebraElement& cost) {
  RetrievedSolution out = retrieve_solution(x_t, op, b);
  out.objective_shift = std::abs(inner_product(cost, out.x_tilde) - inner_product(cost, x_t));
  return out;
}

nlohmann::json projected_to_json(const ProjectedProgram& pt) {
  nlohmann::json j = program_to_json(pt.program);
  j["sketch"] = sketch_to_json(pt.sketch, false);
  j["source"] = pt.source_id;
  return j;
}

}  // namespace rpcone
