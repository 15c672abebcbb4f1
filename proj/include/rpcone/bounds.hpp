#pragma once
// Quantities entering the theoretical error bounds and their evaluation.
#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "json.hpp"
#include "rpcone/kernels.hpp"
#include "rpcone/program.hpp"

namespace rpcone {

inline constexpr double kDefaultC2 = 1.0;
inline constexpr double kDefaultCTilde = 2.0;
inline constexpr double kDefaultU = 2.0;

/// sum_i rho(A_i), an upper bound on the operator norm of y -> sum_i y_i A_i.
double opnorm_bound(const ConicProgram& p);

struct WidthEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  int draws = 0;
};

/// Monte-Carlo mean of sup_{x in S} g.x over `draws` standard normal g in R^dim.
WidthEstimate estimate_gaussian_width(int dim, const SupremumFn& sup, int draws, std::uint64_t seed);

/// sup over the columns of `points`.
SupremumFn finite_set_sup(Eigen::MatrixXd points);
/// sup over the Euclidean ball of the given radius centred at 0.
SupremumFn euclidean_ball_sup(double radius = 1.0);
/// sup over {x in K : <e, x> <= 1}, in coordinates: max(0, lambda_max(Q^-1 g)).
SupremumFn cone_unit_ball_sup(const ConeSpec& spec);

/// Largest pairwise Euclidean distance between the columns of `points`.
double finite_set_diameter(const Eigen::MatrixXd& points);

/// Diameter of {x in K : <e, x> <= 1} in coordinates, taken over its extreme
/// points 0 and the primitive idempotents.
double cone_unit_diameter(const ConeSpec& spec);

struct InfeasibilityCondition {
  double lhs = 0.0;
  bool holds = false;
  /// y_hat = 0: the inequality is vacuous.
  bool degenerate = false;
};

/// eps ||y_hat|| (||b|| + opnorm) < 1.
InfeasibilityCondition eval_infeasibility_condition(double epsilon, const Eigen::VectorXd& y_hat,
                                                    const Eigen::VectorXd& b, double opnorm);

/// eps ||y*|| (opnorm theta + ||b||).
double eval_optimality_bound(double epsilon, const Eigen::VectorXd& y_star, double theta, double opnorm,
                             const Eigen::VectorXd& b);

/// Denominator used by the three width-based bounds.
enum class BoundScaling { kSqrtLogN, kSqrtD };

/// sqrt(log n), or sqrt(d) for the alternative scaling.
double bound_denominator(BoundScaling scaling, int n, int d);

/// eps theta ||A||_2 (C2 w_B + u Delta) / denom.
double eval_feasibility_error_bound(double epsilon, double theta, double op_norm2, double w_b, double u,
                                    double delta, int n, double c2,
                                    BoundScaling scaling = BoundScaling::kSqrtLogN, int d = 0);

/// lambda_1 - eps theta kappa ||Q^1/2|| (C2 w_B + u Delta) / denom.
double eval_retrieval_cone_bound(double lambda1, double epsilon, double theta, double kappa,
                                 double norm_q_half, double w_b, double u, double delta, int n, double c2,
                                 BoundScaling scaling = BoundScaling::kSqrtLogN, int d = 0);

/// eps theta kappa ||c|| (C2 w_B + u Delta) / denom.
double eval_retrieval_objective_bound(double epsilon, double theta, double kappa, double norm_c, double w_b,
                                      double u, double delta, int n, double c2,
                                      BoundScaling scaling = BoundScaling::kSqrtLogN, int d = 0);

struct ErrorReport {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  struct Measured {
    double value_p = kNaN;
    double value_pt = kNaN;
    double feasibility_residual = kNaN;
    double lambda_min_retrieved = kNaN;
    double objective_shift = kNaN;
    std::optional<bool> detected;
  } measured;

  struct Theoretical {
    double infeasibility_lhs = kNaN;
    double optimality_gap_bound = kNaN;
    double feasibility_error_bound = kNaN;
    double retrieval_cone_bound = kNaN;
    double retrieval_objective_bound = kNaN;
    double feasibility_error_bound_sqrt_d = kNaN;
    double retrieval_cone_bound_sqrt_d = kNaN;
    double retrieval_objective_bound_sqrt_d = kNaN;
  } theoretical;

  struct Parameters {
    double epsilon = kNaN;
    int d = 0;
    int m = 0;
    int n = 0;
    double theta = kNaN;
    double u = kDefaultU;
    double c2 = kDefaultC2;
    double c_tilde = kDefaultCTilde;
    double c0 = kNaN;
    double w_b = kNaN;
    double w_b_std_error = kNaN;
    double delta = kNaN;
    double kappa = kNaN;
    double op_norm2 = kNaN;
    double opnorm_bound = kNaN;
    double norm_b = kNaN;
    double norm_c = kNaN;
    double norm_y_star = kNaN;
    double norm_y_hat = kNaN;
    double norm_q_half = kNaN;
    double lambda1_xt = kNaN;
  } parameters;
};

/// Recomputes every theoretical entry from `r.parameters` alone; entries whose
/// inputs are NaN stay NaN.
void fill_theoretical(ErrorReport& r);

nlohmann::json report_to_json(const ErrorReport& r);
ErrorReport report_from_json(const nlohmann::json& j);

}  // namespace rpcone
