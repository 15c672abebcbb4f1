#include "rpcone/kernels.hpp"

#include <cmath>

#include "rpcone/rng.hpp"

namespace rpcone::kernels {

namespace {

using RowRef = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

void fill_sketch_row(SketchFamily family, double density, double scale, std::uint64_t seed,
                     RowRef row) {
  SplitMix64 rng(seed);
  if (family == SketchFamily::kGaussian) {
    for (Eigen::Index i = 0; i < row.size(); ++i) row(i) = scale * rng.normal();
    return;
  }
  // +-scale with probability density/2 each, 0 otherwise.
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    const double u = rng.uniform();
    row(i) = u < 0.5 * density ? scale : (u < density ? -scale : 0.0);
  }
}

double entry_scale(SketchFamily family, int d, double density) {
  return family == SketchFamily::kGaussian ? 1.0 / std::sqrt(static_cast<double>(d))
                                           : 1.0 / std::sqrt(static_cast<double>(d) * density);
}

void aggregate_row(const Eigen::MatrixXd& t, const Eigen::MatrixXd& a, Eigen::Index k,
                   RowRef out) {
  out.setZero();
  for (Eigen::Index i = 0; i < t.cols(); ++i) {
    const double w = t(k, i);
    if (w != 0.0) out.noalias() += w * a.row(i);
  }
}

double norm_ratio(const Eigen::MatrixXd& t, const Eigen::MatrixXd& points, Eigen::Index j) {
  const double denom = points.col(j).squaredNorm();
  if (denom == 0.0) return 1.0;
  return (t * points.col(j)).squaredNorm() / denom;
}

double sup_draw(int dim, const SupremumFn& sup, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::VectorXd g(dim);
  for (int i = 0; i < dim; ++i) g(i) = rng.normal();
  return sup(g);
}

}  // namespace

namespace serial {

Eigen::MatrixXd fill_sketch(SketchFamily family, int d, int m, double density, std::uint64_t seed) {
  Eigen::MatrixXd t(d, m);
  const double scale = entry_scale(family, d, density);
  for (int k = 0; k < d; ++k) fill_sketch_row(family, density, scale, derive_seed(seed, k), t.row(k));
  return t;
}

Eigen::MatrixXd aggregate_rows(const Eigen::MatrixXd& t, const Eigen::MatrixXd& a) {
  Eigen::MatrixXd out(t.rows(), a.cols());
  for (Eigen::Index k = 0; k < t.rows(); ++k) aggregate_row(t, a, k, out.row(k));
  return out;
}

std::vector<double> squared_norm_ratios(const Eigen::MatrixXd& t, const Eigen::MatrixXd& points) {
  std::vector<double> out(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) out[j] = norm_ratio(t, points, j);
  return out;
}

std::vector<double> gaussian_sup_draws(int dim, const SupremumFn& sup, int draws, std::uint64_t seed) {
  std::vector<double> out(draws);
  for (int j = 0; j < draws; ++j) out[j] = sup_draw(dim, sup, derive_seed(seed, j));
  return out;
}

}  // namespace serial

namespace omp {

Eigen::MatrixXd fill_sketch(SketchFamily family, int d, int m, double density, std::uint64_t seed) {
  Eigen::MatrixXd t(d, m);
  const double scale = entry_scale(family, d, density);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < d; ++k) fill_sketch_row(family, density, scale, derive_seed(seed, k), t.row(k));
  return t;
}

Eigen::MatrixXd aggregate_rows(const Eigen::MatrixXd& t, const Eigen::MatrixXd& a) {
  Eigen::MatrixXd out(t.rows(), a.cols());
  const Eigen::Index rows = t.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index k = 0; k < rows; ++k) aggregate_row(t, a, k, out.row(k));
  return out;
}

std::vector<double> squared_norm_ratios(const Eigen::MatrixXd& t, const Eigen::MatrixXd& points) {
  std::vector<double> out(points.cols());
  const Eigen::Index cols = points.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) out[j] = norm_ratio(t, points, j);
  return out;
}

std::vector<double> gaussian_sup_draws(int dim, const SupremumFn& sup, int draws, std::uint64_t seed) {
  std::vector<double> out(draws);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < draws; ++j) out[j] = sup_draw(dim, sup, derive_seed(seed, j));
  return out;
}

}  // namespace omp

}  // namespace rpcone::kernels
