#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "rpcone/kernels.hpp"

namespace rpcone {

std::string to_string(SketchFamily family);
SketchFamily sketch_family_from_string(const std::string& name);

/// A d x m random projection with the parameters it was drawn from.
struct ProjectionSketch {
  Eigen::MatrixXd matrix;
  SketchFamily family = SketchFamily::kAchlioptasSparse;
  double epsilon = 0.0;
  double c0 = 0.0;
  double density = 1.0;
  std::uint64_t seed = 0;
  /// True for the identity matrix (no reduction).
  bool identity = false;

  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }

  static ProjectionSketch make_identity(int m);
};

/// min(m, ceil(c0 ln(m) / eps^2)).
int embed_dimension(int m, double epsilon, double c0);

/// Default c0 reproducing d = 716 for m = 1000, eps = 0.13.
inline constexpr double kDefaultC0 = 1.75;
/// Nonzero fraction used for the sparse sign family.
inline constexpr double kDefaultDensity = 0.1;

/// Achlioptas/sparse sign entries are +-1/sqrt(d q) with probability q/2 each and
/// 0 otherwise; Gaussian entries are N(0, 1/d). Bit-identical for equal inputs.
ProjectionSketch sample_rp(int d, int m, SketchFamily family, double density, std::uint64_t seed);

struct SketchParams {
  double epsilon = 0.2;
  double c0 = kDefaultC0;
  double density = kDefaultDensity;
  SketchFamily family = SketchFamily::kAchlioptasSparse;
  std::uint64_t seed = 0;
  /// Overrides embed_dimension when set.
  std::optional<int> d_override;
  /// Use T = I (requires d = m).
  bool identity = false;
};

/// Chooses d from the parameters and samples the sketch, recording eps and c0.
ProjectionSketch make_sketch(int m, const SketchParams& params);

/// Fraction of columns of `points` with (1-eps)||x||^2 <= ||Tx||^2 <= (1+eps)||x||^2.
double check_norm_preservation(const Eigen::MatrixXd& t, const Eigen::MatrixXd& points, double epsilon);
/// ||T'T x - x||_inf <= eps ||x||_2.
bool check_gram_residual(const Eigen::MatrixXd& t, const Eigen::VectorXd& x, double epsilon);
/// |<Tx, Ty> - <x, y>| <= eps ||x||_2 ||y||_2.
bool check_scalar_product(const Eigen::MatrixXd& t, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          double epsilon);

/// Metadata only, or metadata plus the dense matrix.
nlohmann::json sketch_to_json(const ProjectionSketch& sketch, bool include_matrix);

}  // namespace rpcone
