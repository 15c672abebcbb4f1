#include "rpcone/program.hpp"

#include <limits>

#include "rpcone/errors.hpp"

namespace rpcone {

ConicProgram::ConicProgram(ConeSpec spec, Eigen::MatrixXd constraint_coords, Eigen::VectorXd rhs,
                           Eigen::VectorXd cost_coords, double trace_bound) {
  if (constraint_coords.rows() < 1) throw StructuralError("program needs at least one constraint");
  if (constraint_coords.cols() != spec.dim())
    throw StructuralError("constraint width does not match cone dimension");
  if (rhs.size() != constraint_coords.rows())
    throw StructuralError("rhs length does not match constraint count");
  if (!(trace_bound > 0.0)) throw ParameterError("trace bound must be positive");
  AlgebraElement cost(spec, std::move(cost_coords));
  data_ = std::make_shared<const Data>(Data{std::move(spec), std::move(constraint_coords),
                                            std::move(rhs), std::move(cost), trace_bound});
}

namespace {

Eigen::MatrixXd stack_rows(const ConeSpec& spec, const std::vector<AlgebraElement>& rows) {
  Eigen::MatrixXd out(rows.size(), spec.dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].spec() == spec)) throw StructuralError("constraint spec mismatch");
    out.row(static_cast<Eigen::Index>(i)) = rows[i].coords().transpose();
  }
  return out;
}

}  // namespace

ConicProgram::ConicProgram(const ConeSpec& spec, const std::vector<AlgebraElement>& constraints,
                           Eigen::VectorXd rhs, const AlgebraElement& cost, double trace_bound)
    : ConicProgram(spec, stack_rows(spec, constraints), std::move(rhs),
                   (cost.spec() == spec ? cost.coords()
                                        : throw StructuralError("cost spec mismatch")),
                   trace_bound) {}

AlgebraElement ConicProgram::constraint(int i) const {
  return AlgebraElement(spec(), data_->constraints.row(i).transpose());
}

Eigen::VectorXd ConicProgram::apply(const AlgebraElement& x) const {
  if (!(x.spec() == spec())) throw StructuralError("apply: spec mismatch");
  return data_->constraints * spec().metric_weights().cwiseProduct(x.coords());
}

AlgebraElement ConicProgram::adjoint(const Eigen::VectorXd& y) const {
  if (y.size() != num_constraints()) throw StructuralError("adjoint: wrong multiplier length");
  return AlgebraElement(spec(), data_->constraints.transpose() * y);
}

ConicProgram ConicProgram::with_cost(const AlgebraElement& cost) const {
  return ConicProgram(spec(), data_->constraints, data_->rhs, cost.coords(), data_->trace_bound);
}

LinearOperator::LinearOperator(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  singular_values_ = svd.singularValues();
  u_ = svd.matrixU();
  v_ = svd.matrixV();
  rank_tol_ = sigma_max() * static_cast<double>(std::max(matrix_.rows(), matrix_.cols())) *
              std::numeric_limits<double>::epsilon();
  rank_ = 0;
  for (Eigen::Index i = 0; i < singular_values_.size(); ++i)
    if (singular_values_(i) > rank_tol_) ++rank_;
}

double LinearOperator::sigma_min() const {
  return rank_ > 0 ? singular_values_(rank_ - 1) : 0.0;
}

Eigen::VectorXd LinearOperator::pinv_apply(const Eigen::VectorXd& r) const {
  if (r.size() != rows()) throw StructuralError("pinv_apply: wrong length");
  const Eigen::VectorXd coeff = u_.leftCols(rank_).transpose() * r;
  return v_.leftCols(rank_) * coeff.cwiseQuotient(singular_values_.head(rank_));
}

LinearOperator build_operator(const ConicProgram& p) {
  return LinearOperator(p.constraint_coords() * p.spec().metric_weights().asDiagonal());
}

PrimalResiduals primal_residuals(const ConicProgram& p, const AlgebraElement& x) {
  return {(p.apply(x) - p.rhs()).norm(), p.trace_bound() - trace(x),
          std::max(0.0, -lambda_min(x))};
}

AlgebraElement dual_slack(const ConicProgram& p, const Eigen::VectorXd& y, double nu) {
  AlgebraElement s = p.cost() - p.adjoint(y);
  s += nu * identity_element(p.spec());
  return s;
}

DualProgram::DualProgram(ConicProgram primal, double mu) : primal_(std::move(primal)), mu_(mu) {
  if (mu_ < 0.0) throw ParameterError("relaxation parameter must be nonnegative");
}

double DualProgram::objective(const Eigen::VectorXd& y, double nu) const {
  return primal_.rhs().dot(y) - primal_.trace_bound() * nu;
}

AlgebraElement DualProgram::slack(const Eigen::VectorXd& y, double nu) const {
  return dual_slack(primal_, y, nu + mu_);
}

bool DualProgram::is_feasible(const Eigen::VectorXd& y, double nu, double tol) const {
  return nu >= 0.0 && lambda_min(slack(y, nu)) >= -tol;
}

ConicProgram DualProgram::primal() const {
  return primal_.with_cost(primal_.cost() + mu_ * identity_element(primal_.spec()));
}

}  // namespace rpcone
