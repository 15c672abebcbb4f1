#include "rpcone/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "rpcone/errors.hpp"

namespace rpcone {

double opnorm_bound(const ConicProgram& p) {
  double total = 0.0;
  for (int i = 0; i < p.num_constraints(); ++i) total += spectral_radius(p.constraint(i));
  return total;
}

WidthEstimate estimate_gaussian_width(int dim, const SupremumFn& sup, int draws, std::uint64_t seed) {
  if (draws < 100) throw ParameterError("Gaussian width needs at least 100 draws");
  if (dim < 1) throw ParameterError("dimension must be positive");
  const std::vector<double> values = kernels::omp::gaussian_sup_draws(dim, sup, draws, seed);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= draws;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= draws - 1;
  return {mean, std::sqrt(var / draws), draws};
}

SupremumFn finite_set_sup(Eigen::MatrixXd points) {
  if (points.cols() == 0) throw ParameterError("finite set must be nonempty");
  return [points = std::move(points)](const Eigen::VectorXd& g) {
    return (points.transpose() * g).maxCoeff();
  };
}

SupremumFn euclidean_ball_sup(double radius) {
  if (radius < 0.0) throw ParameterError("radius must be nonnegative");
  return [radius](const Eigen::VectorXd& g) { return radius * g.norm(); };
}

SupremumFn cone_unit_ball_sup(const ConeSpec& spec) {
  const Eigen::VectorXd inv_weights = spec.metric_weights().cwiseInverse();
  return [spec, inv_weights](const Eigen::VectorXd& g) {
    return std::max(0.0, lambda_max(AlgebraElement(spec, inv_weights.cwiseProduct(g))));
  };
}

double finite_set_diameter(const Eigen::MatrixXd& points) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < points.cols(); ++i)
    for (Eigen::Index j = i + 1; j < points.cols(); ++j)
      best = std::max(best, (points.col(i) - points.col(j)).norm());
  return best;
}

double cone_unit_diameter(const ConeSpec& spec) {
  // Per block: the largest coordinate norm of a primitive idempotent and the
  // largest distance between two idempotents of the same block.
  std::vector<double> radius;
  double best = 0.0;
  for (const Block& b : spec.blocks()) {
    switch (b.kind) {
      case BlockKind::kOrthant:
      case BlockKind::kPsd:
        radius.push_back(1.0);
        best = std::max(best, b.size >= 2 ? std::sqrt(2.0) : 1.0);
        break;
      case BlockKind::kLorentz:
        radius.push_back(std::sqrt(0.5));
        best = std::max(best, 1.0);
        break;
    }
  }
  for (std::size_t i = 0; i < radius.size(); ++i)
    for (std::size_t j = i + 1; j < radius.size(); ++j)
      best = std::max(best, std::hypot(radius[i], radius[j]));
  return best;
}

namespace {

double infeasibility_lhs(double epsilon, double norm_y_hat, double norm_b, double opnorm) {
  return epsilon * norm_y_hat * (norm_b + opnorm);
}

double optimality_bound(double epsilon, double norm_y_star, double theta, double opnorm, double norm_b) {
  return epsilon * norm_y_star * (opnorm * theta + norm_b);
}

double width_term(double w_b, double u, double delta, double c2) {
  if (u < 0.0) throw ParameterError("u must be nonnegative");
  return c2 * w_b + u * delta;
}

}  // namespace

InfeasibilityCondition eval_infeasibility_condition(double epsilon, const Eigen::VectorXd& y_hat,
                                                    const Eigen::VectorXd& b, double opnorm) {
  if (y_hat.size() != b.size()) throw StructuralError("certificate and right-hand side differ in length");
  InfeasibilityCondition out;
  const double ny = y_hat.norm();
  out.lhs = infeasibility_lhs(epsilon, ny, b.norm(), opnorm);
  out.holds = out.lhs < 1.0;
  out.degenerate = ny == 0.0;
  return out;
}

double eval_optimality_bound(double epsilon, const Eigen::VectorXd& y_star, double theta, double opnorm,
                             const Eigen::VectorXd& b) {
  return optimality_bound(epsilon, y_star.norm(), theta, opnorm, b.norm());
}

double bound_denominator(BoundScaling scaling, int n, int d) {
  if (scaling == BoundScaling::kSqrtD) {
    if (d < 1) throw ParameterError("the sqrt(d) scaling needs d >= 1");
    return std::sqrt(static_cast<double>(d));
  }
  if (n < 2) throw ParameterError("the sqrt(log n) scaling needs n >= 2");
  return std::sqrt(std::log(static_cast<double>(n)));
}

double eval_feasibility_error_bound(double epsilon, double theta, double op_norm2, double w_b, double u,
                                    double delta, int n, double c2, BoundScaling scaling, int d) {
  return epsilon * theta * op_norm2 * width_term(w_b, u, delta, c2) / bound_denominator(scaling, n, d);
}

double eval_retrieval_cone_bound(double lambda1, double epsilon, double theta, double kappa,
                                 double norm_q_half, double w_b, double u, double delta, int n, double c2,
                                 BoundScaling scaling, int d) {
  return lambda1 - epsilon * theta * kappa * norm_q_half * width_term(w_b, u, delta, c2) /
                       bound_denominator(scaling, n, d);
}

double eval_retrieval_objective_bound(double epsilon, double theta, double kappa, double norm_c, double w_b,
                                      double u, double delta, int n, double c2, BoundScaling scaling,
                                      int d) {
  return epsilon * theta * kappa * norm_c * width_term(w_b, u, delta, c2) / bound_denominator(scaling, n, d);
}

void fill_theoretical(ErrorReport& r) {
  const auto& q = r.parameters;
  auto& t = r.theoretical;
  t = {};
  if (!std::isnan(q.norm_y_hat))
    t.infeasibility_lhs = infeasibility_lhs(q.epsilon, q.norm_y_hat, q.norm_b, q.opnorm_bound);
  if (!std::isnan(q.norm_y_star))
    t.optimality_gap_bound = optimality_bound(q.epsilon, q.norm_y_star, q.theta, q.opnorm_bound, q.norm_b);
  if (std::isnan(q.w_b) || std::isnan(q.delta) || q.n < 2) return;
  for (const BoundScaling scaling : {BoundScaling::kSqrtLogN, BoundScaling::kSqrtD}) {
    if (scaling == BoundScaling::kSqrtD && q.d < 1) continue;
    const bool log_n = scaling == BoundScaling::kSqrtLogN;
    (log_n ? t.feasibility_error_bound : t.feasibility_error_bound_sqrt_d) = eval_feasibility_error_bound(
        q.epsilon, q.theta, q.op_norm2, q.w_b, q.u, q.delta, q.n, q.c2, scaling, q.d);
    (log_n ? t.retrieval_cone_bound : t.retrieval_cone_bound_sqrt_d) =
        eval_retrieval_cone_bound(q.lambda1_xt, q.epsilon, q.theta, q.kappa, q.norm_q_half, q.w_b, q.u,
                                  q.delta, q.n, q.c2, scaling, q.d);
    (log_n ? t.retrieval_objective_bound : t.retrieval_objective_bound_sqrt_d) =
        eval_retrieval_objective_bound(q.epsilon, q.theta, q.kappa, q.norm_c, q.w_b, q.u, q.delta, q.n,
                                       q.c2, scaling, q.d);
  }
}

namespace {

nlohmann::json num(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

double num_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return ErrorReport::kNaN;
  return j.at(key).get<double>();
}

}  // namespace

nlohmann::json report_to_json(const ErrorReport& r) {
  const auto& m = r.measured;
  const auto& t = r.theoretical;
  const auto& q = r.parameters;
  nlohmann::json j;
  j["measured"] = {{"value_P", num(m.value_p)},
                   {"value_PT", num(m.value_pt)},
                   {"feasibility_residual", num(m.feasibility_residual)},
                   {"lambda_min_retrieved", num(m.lambda_min_retrieved)},
                   {"objective_shift", num(m.objective_shift)},
                   {"detected", m.detected ? nlohmann::json(*m.detected) : nlohmann::json(nullptr)}};
  j["theoretical"] = {{"infeasibility_lhs", num(t.infeasibility_lhs)},
                      {"optimality_gap_bound", num(t.optimality_gap_bound)},
                      {"feasibility_error_bound", num(t.feasibility_error_bound)},
                      {"retrieval_cone_bound", num(t.retrieval_cone_bound)},
                      {"retrieval_objective_bound", num(t.retrieval_objective_bound)},
                      {"feasibility_error_bound_sqrt_d", num(t.feasibility_error_bound_sqrt_d)},
                      {"retrieval_cone_bound_sqrt_d", num(t.retrieval_cone_bound_sqrt_d)},
                      {"retrieval_objective_bound_sqrt_d", num(t.retrieval_objective_bound_sqrt_d)}};
  j["parameters"] = {{"epsilon", num(q.epsilon)},   {"d", q.d},
                     {"m", q.m},                    {"n", q.n},
                     {"theta", num(q.theta)},       {"u", num(q.u)},
                     {"C2", num(q.c2)},             {"C_tilde", num(q.c_tilde)},
                     {"c0", num(q.c0)},             {"w_B", num(q.w_b)},
                     {"w_B_std_error", num(q.w_b_std_error)},
                     {"Delta", num(q.delta)},       {"kappa", num(q.kappa)},
                     {"op_norm2", num(q.op_norm2)}, {"opnorm_bound", num(q.opnorm_bound)},
                     {"norm_b", num(q.norm_b)},     {"norm_c", num(q.norm_c)},
                     {"norm_y_star", num(q.norm_y_star)},
                     {"norm_y_hat", num(q.norm_y_hat)},
                     {"norm_Q_half", num(q.norm_q_half)},
                     {"lambda1_xT", num(q.lambda1_xt)}};
  return j;
}

ErrorReport report_from_json(const nlohmann::json& j) {
  try {
    ErrorReport r;
    const auto& m = j.at("measured");
    r.measured.value_p = num_from(m, "value_P");
    r.measured.value_pt = num_from(m, "value_PT");
    r.measured.feasibility_residual = num_from(m, "feasibility_residual");
    r.measured.lambda_min_retrieved = num_from(m, "lambda_min_retrieved");
    r.measured.objective_shift = num_from(m, "objective_shift");
    if (m.contains("detected") && !m.at("detected").is_null()) r.measured.detected = m.at("detected").get<bool>();
    const auto& t = j.at("theoretical");
    r.theoretical.infeasibility_lhs = num_from(t, "infeasibility_lhs");
    r.theoretical.optimality_gap_bound = num_from(t, "optimality_gap_bound");
    r.theoretical.feasibility_error_bound = num_from(t, "feasibility_error_bound");
    r.theoretical.retrieval_cone_bound = num_from(t, "retrieval_cone_bound");
    r.theoretical.retrieval_objective_bound = num_from(t, "retrieval_objective_bound");
    r.theoretical.feasibility_error_bound_sqrt_d = num_from(t, "feasibility_error_bound_sqrt_d");
    r.theoretical.retrieval_cone_bound_sqrt_d = num_from(t, "retrieval_cone_bound_sqrt_d");
    r.theoretical.retrieval_objective_bound_sqrt_d = num_from(t, "retrieval_objective_bound_sqrt_d");
    const auto& q = j.at("parameters");
    auto& p = r.parameters;
    p.epsilon = num_from(q, "epsilon");
    p.d = q.at("d").get<int>();
    p.m = q.at("m").get<int>();
    p.n = q.at("n").get<int>();
    p.theta = num_from(q, "theta");
    p.u = num_from(q, "u");
    p.c2 = num_from(q, "C2");
    p.c_tilde = num_from(q, "C_tilde");
    p.c0 = num_from(q, "c0");
    p.w_b = num_from(q, "w_B");
    p.w_b_std_error = num_from(q, "w_B_std_error");
    p.delta = num_from(q, "Delta");
    p.kappa = num_from(q, "kappa");
    p.op_norm2 = num_from(q, "op_norm2");
    p.opnorm_bound = num_from(q, "opnorm_bound");
    p.norm_b = num_from(q, "norm_b");
    p.norm_c = num_from(q, "norm_c");
    p.norm_y_star = num_from(q, "norm_y_star");
    p.norm_y_hat = num_from(q, "norm_y_hat");
    p.norm_q_half = num_from(q, "norm_Q_half");
    p.lambda1_xt = num_from(q, "lambda1_xT");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed error report: ") + e.what());
  }
}

}  // namespace rpcone
