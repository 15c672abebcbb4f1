#include "rpcone/sketch.hpp"

#include <cmath>

#include "rpcone/errors.hpp"

namespace rpcone {

std::string to_string(SketchFamily family) {
  return family == SketchFamily::kGaussian ? "gaussian" : "achlioptas";
}

SketchFamily sketch_family_from_string(const std::string& name) {
  if (name == "achlioptas" || name == "sparse") return SketchFamily::kAchlioptasSparse;
  if (name == "gaussian") return SketchFamily::kGaussian;
  throw ParameterError("unknown sketch family '" + name + "'");
}

ProjectionSketch ProjectionSketch::make_identity(int m) {
  ProjectionSketch s;
  s.matrix = Eigen::MatrixXd::Identity(m, m);
  s.identity = true;
  return s;
}

int embed_dimension(int m, double epsilon, double c0) {
  if (m < 2) throw ParameterError("embed_dimension needs m >= 2");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  if (!(c0 > 0.0)) throw ParameterError("c0 must be positive");
  const double raw = std::ceil(c0 * std::log(static_cast<double>(m)) / (epsilon * epsilon));
  return raw >= m ? m : static_cast<int>(raw);
}

ProjectionSketch sample_rp(int d, int m, SketchFamily family, double density, std::uint64_t seed) {
  if (d < 1 || d > m) throw ParameterError("sketch needs 1 <= d <= m");
  if (!(density > 0.0 && density <= 1.0)) throw ParameterError("density must lie in (0, 1]");
  ProjectionSketch s;
  s.matrix = kernels::omp::fill_sketch(family, d, m, density, seed);
  s.family = family;
  s.density = density;
  s.seed = seed;
  return s;
}

ProjectionSketch make_sketch(int m, const SketchParams& params) {
  if (params.identity) {
    if (params.d_override && *params.d_override != m)
      throw ParameterError("identity sketch needs d = m");
    ProjectionSketch s = ProjectionSketch::make_identity(m);
    s.epsilon = params.epsilon;
    s.c0 = params.c0;
    s.seed = params.seed;
    return s;
  }
  const int d = params.d_override ? *params.d_override : embed_dimension(m, params.epsilon, params.c0);
  ProjectionSketch s = sample_rp(d, m, params.family, params.density, params.seed);
  s.epsilon = params.epsilon;
  s.c0 = params.c0;
  return s;
}

double check_norm_preservation(const Eigen::MatrixXd& t, const Eigen::MatrixXd& points, double epsilon) {
  if (points.rows() != t.cols()) throw StructuralError("points have the wrong length");
  if (points.cols() == 0) return 1.0;
  const auto ratios = kernels::omp::squared_norm_ratios(t, points);
  int inside = 0;
  for (double r : ratios)
    if (r >= 1.0 - epsilon && r <= 1.0 + epsilon) ++inside;
  return static_cast<double>(inside) / static_cast<double>(ratios.size());
}

bool check_gram_residual(const Eigen::MatrixXd& t, const Eigen::VectorXd& x, double epsilon) {
  if (x.size() != t.cols()) throw StructuralError("vector has the wrong length");
  const Eigen::VectorXd residual = t.transpose() * (t * x) - x;
  return residual.lpNorm<Eigen::Infinity>() <= epsilon * x.norm();
}

bool check_scalar_product(const Eigen::MatrixXd& t, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          double epsilon) {
  if (x.size() != t.cols() || y.size() != t.cols()) throw StructuralError("vector has the wrong length");
  const double projected = (t * x).dot(t * y);
  return std::abs(projected - x.dot(y)) <= epsilon * x.norm() * y.norm();
}

nlohmann::json sketch_to_json(const ProjectionSketch& sketch, bool include_matrix) {
  nlohmann::json j = {{"family", sketch.identity ? std::string("identity") : to_string(sketch.family)},
                      {"d", sketch.rows()},
                      {"m", sketch.cols()},
                      {"epsilon", sketch.epsilon},
                      {"c0", sketch.c0},
                      {"density", sketch.density},
                      {"seed", sketch.seed}};
  if (include_matrix) {
    nlohmann::json rows = nlohmann::json::array();
    for (int k = 0; k < sketch.rows(); ++k) {
      const Eigen::RowVectorXd r = sketch.matrix.row(k);
      rows.push_back(std::vector<double>(r.data(), r.data() + r.size()));
    }
    j["matrix"] = std::move(rows);
  }
  return j;
}

}  // namespace rpcone
