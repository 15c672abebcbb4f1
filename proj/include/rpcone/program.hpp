#pragma once

// Standard-form symmetric conic programs
//
//   (P)  min <c, x>  s.t.  <A_i, x> = b_i (i < m),  <e, x> <= theta,  x in K
//   (D)  max b'y - theta nu  s.t.  sum_i y_i A_i - nu e <= c,  nu >= 0
//
// and the flattened matrix of the map x -> (<A_i, x>)_i.

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "rpcone/jordan.hpp"

namespace rpcone {

class ConicProgram {
 public:
  ConicProgram() = default;
  /// `constraint_coords` holds the coordinates of A_i in row i.
  ConicProgram(ConeSpec spec, Eigen::MatrixXd constraint_coords, Eigen::VectorXd rhs,
               Eigen::VectorXd cost_coords, double trace_bound);
  ConicProgram(const ConeSpec& spec, const std::vector<AlgebraElement>& constraints,
               Eigen::VectorXd rhs, const AlgebraElement& cost, double trace_bound);

  const ConeSpec& spec() const { return data_->spec; }
  int num_constraints() const { return static_cast<int>(data_->constraints.rows()); }
  int dim() const { return data_->spec.dim(); }

  const Eigen::MatrixXd& constraint_coords() const { return data_->constraints; }
  AlgebraElement constraint(int i) const;
  const Eigen::VectorXd& rhs() const { return data_->rhs; }
  const AlgebraElement& cost() const { return data_->cost; }
  double trace_bound() const { return data_->trace_bound; }

  /// (<A_i, x>)_i.
  Eigen::VectorXd apply(const AlgebraElement& x) const;
  /// sum_i y_i A_i.
  AlgebraElement adjoint(const Eigen::VectorXd& y) const;
  double objective(const AlgebraElement& x) const { return inner_product(cost(), x); }

  /// Same constraints and bound with a different cost.
  ConicProgram with_cost(const AlgebraElement& cost) const;

 private:
  struct Data {
    ConeSpec spec;
    Eigen::MatrixXd constraints;
    Eigen::VectorXd rhs;
    AlgebraElement cost;
    double trace_bound = 1.0;
  };
  std::shared_ptr<const Data> data_;
};

/// Matrix representation of x -> (<A_i, x>)_i acting on coordinates, with its
/// thin SVD. Row i is Q times the coordinates of A_i.
class LinearOperator {
 public:
  explicit LinearOperator(Eigen::MatrixXd matrix);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  int rows() const { return static_cast<int>(matrix_.rows()); }
  int cols() const { return static_cast<int>(matrix_.cols()); }

  /// Descending.
  const Eigen::VectorXd& singular_values() const { return singular_values_; }
  double sigma_max() const { return singular_values_.size() ? singular_values_(0) : 0.0; }
  /// Smallest singular value above the rank tolerance.
  double sigma_min() const;
  int rank() const { return rank_; }
  /// sigma_max * max(rows, cols) * machine epsilon.
  double rank_tolerance() const { return rank_tol_; }
  bool full_row_rank() const { return rank_ == rows(); }
  double condition_number() const { return sigma_max() / sigma_min(); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix_ * x; }
  /// Pseudoinverse restricted to the numerical row space: V_r S_r^-1 U_r' r.
  Eigen::VectorXd pinv_apply(const Eigen::VectorXd& r) const;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd u_;
  Eigen::MatrixXd v_;
  Eigen::VectorXd singular_values_;
  int rank_ = 0;
  double rank_tol_ = 0.0;
};

LinearOperator build_operator(const ConicProgram& p);

struct PrimalResiduals {
  /// ||A x - b||_2.
  double eq_residual;
  /// theta - <e, x>.
  double trace_slack;
  /// max(0, -lambda_min(x)).
  double cone_violation;
};

PrimalResiduals primal_residuals(const ConicProgram& p, const AlgebraElement& x);

/// c - sum_i y_i A_i + nu e.
AlgebraElement dual_slack(const ConicProgram& p, const Eigen::VectorXd& y, double nu);

/// The dual (D) of a program, optionally relaxed to sum_i y_i A_i - nu e <= c + mu e.
/// Holds no data of its own.
class DualProgram {
 public:
  explicit DualProgram(ConicProgram primal, double mu = 0.0);

  const ConicProgram& source() const { return primal_; }
  double mu() const { return mu_; }

  double objective(const Eigen::VectorXd& y, double nu) const;
  /// c + mu e - sum_i y_i A_i + nu e.
  AlgebraElement slack(const Eigen::VectorXd& y, double nu) const;
  bool is_feasible(const Eigen::VectorXd& y, double nu, double tol) const;
  /// The primal whose dual this is: cost c + mu e.
  ConicProgram primal() const;

 private:
  ConicProgram primal_;
  double mu_;
};

}  // namespace rpcone
