#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rpcone/program.hpp"

namespace rpcone {

enum class SolveStatus { kOptimal, kPrimalInfeasible, kUnbounded, kMaxIter, kNumerical };

std::string to_string(SolveStatus status);

struct SolverOptions {
  int max_iter = 50000;
  /// Relative tolerance on feasibility, dual cone violation and duality gap.
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string solver = "builtin";
  /// Residuals are evaluated every `check_every` iterations.
  int check_every = 10;
  /// ADMM over-relaxation in (0, 2).
  double relaxation = 1.6;
  bool equilibrate = true;
  /// Anderson acceleration memory; 0 disables it.
  int anderson_memory = 8;
};

/// Farkas ray for (P): b'y - theta nu = 1 and sum_i y_i A_i - nu e <= 0.
struct Certificate {
  Eigen::VectorXd y_hat;
  double nu_hat = 0.0;
  /// b'y_hat - theta nu_hat.
  double normalization = 0.0;
  /// lambda_max(sum_i y_hat_i A_i - nu_hat e).
  double slack_lambda_max = 0.0;
};

struct SolveResiduals {
  /// ||(A x - b, max(0, <e, x> - theta))||_2.
  double primal_eq = 0.0;
  /// max(0, -lambda_min(c - sum_i y_i A_i + nu e)).
  double dual_cone = 0.0;
  /// |<c, x> - (b'y - theta nu)|.
  double gap = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kNumerical;
  AlgebraElement primal;
  Eigen::VectorXd dual_y;
  double dual_nu = 0.0;
  /// <c, x> for Optimal/MaxIter; +inf when primal infeasible.
  double objective = 0.0;
  SolveResiduals residuals;
  std::optional<Certificate> certificate;
  int iterations = 0;
  double wall_time = 0.0;
};

/// Recomputes both certificate invariants from scratch.
bool verify_certificate(const ConicProgram& p, const Certificate& cert, double tol = 1e-6);

/// Turns an approximate dual ray (y, nu) into an exact-form certificate by
/// raising nu until the aggregate is negative semidefinite and renormalizing.
/// Empty when the ray has no positive normalization left.
std::optional<Certificate> repair_certificate(const ConicProgram& p, const Eigen::VectorXd& y, double nu);

class Solver {
 public:
  virtual ~Solver() = default;
  virtual std::string name() const = 0;
  virtual SolveResult solve(const ConicProgram& p, const SolverOptions& opts) const = 0;
};

/// Operator splitting on the homogeneous self-dual embedding of
///   min c'x  s.t.  A x = b,  <e, x> + t = theta,  (x, t) in K x R_+.
class SplittingSolver final : public Solver {
 public:
  std::string name() const override { return "builtin"; }
  SolveResult solve(const ConicProgram& p, const SolverOptions& opts) const override;
};

/// Adds or replaces a named solver. Safe to call concurrently with lookups.
void register_solver(const std::string& name, std::shared_ptr<const Solver> solver);
/// Throws LookupError for unknown names.
std::shared_ptr<const Solver> solver_registry(const std::string& name);
std::vector<std::string> registered_solvers();

/// Solves with the solver named in `opts`.
SolveResult solve(const ConicProgram& p, const SolverOptions& opts = {});

}  // namespace rpcone
