#pragma once

// Euclidean Jordan algebra arithmetic for products of the three classical
// simple blocks:
//
//   Orthant(k)  R^k with the componentwise product; cone = nonnegative orthant
//   Lorentz(k)  R^k with x o y = (x'y ; x0 ybar + y0 xbar); cone = second-order
//   Psd(s)      symmetric s x s matrices with X o Y = (XY + YX)/2
//
// Elements are stored as one flat coordinate vector. Psd blocks use the scaled
// upper-triangular vectorization (column by column, off-diagonals times
// sqrt(2)), so that Frobenius geometry equals Euclidean geometry of the
// coordinates. The inner product is the canonical trace form per block:
// x'y, 2 x'y and tr(XY) respectively. Written as a quadratic form on the
// coordinates it is diag(Q) with Q = 1, 2, 1 on the three block kinds.

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rpcone {

enum class BlockKind { kOrthant, kLorentz, kPsd };

struct Block {
  BlockKind kind;
  /// Length for Orthant/Lorentz, matrix side for Psd.
  int size;

  int dim() const;
  int degree() const;
  /// Diagonal entry of Q on this block.
  double metric_weight() const { return kind == BlockKind::kLorentz ? 2.0 : 1.0; }

  friend bool operator==(const Block&, const Block&) = default;
};

std::string to_string(const Block& block);

/// Ordered list of simple blocks.
class ConeSpec {
 public:
  ConeSpec() = default;
  explicit ConeSpec(std::vector<Block> blocks);

  static ConeSpec orthant(int k) { return ConeSpec({{BlockKind::kOrthant, k}}); }
  static ConeSpec lorentz(int k) { return ConeSpec({{BlockKind::kLorentz, k}}); }
  static ConeSpec psd(int side) { return ConeSpec({{BlockKind::kPsd, side}}); }

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  /// Flattened coordinate count n.
  int dim() const { return dim_; }
  /// Rank r of the algebra.
  int degree() const { return degree_; }
  /// First coordinate of block `b`.
  int offset(std::size_t b) const { return offsets_[b]; }

  /// Diagonal of Q over all coordinates.
  Eigen::VectorXd metric_weights() const;
  /// ||Q^{1/2}||_2.
  double metric_sqrt_norm() const;

  std::string to_string() const;

  friend bool operator==(const ConeSpec& a, const ConeSpec& b) {
    return a.blocks_ == b.blocks_;
  }

 private:
  std::vector<Block> blocks_;
  std::vector<int> offsets_;
  int dim_ = 0;
  int degree_ = 0;
};

/// Side s of a Psd block whose vectorization has length n = s(s+1)/2, or -1.
int psd_side_from_dim(int n);

/// Index of entry (i, j), i <= j, in the scaled vectorization of a Psd block.
inline int svec_index(int i, int j) { return j * (j + 1) / 2 + i; }

/// Scaled vectorization of the symmetric part of `m`.
Eigen::VectorXd svec(const Eigen::MatrixXd& m);
/// Inverse of svec; always returns an exactly symmetric matrix.
Eigen::MatrixXd smat(Eigen::Ref<const Eigen::VectorXd> v, int side);

class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(ConeSpec spec, Eigen::VectorXd coords);

  static AlgebraElement zero(const ConeSpec& spec);

  const ConeSpec& spec() const { return spec_; }
  const Eigen::VectorXd& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }

  /// Coordinates of block `b`.
  Eigen::Ref<const Eigen::VectorXd> block(std::size_t b) const;
  /// Matrix of Psd block `b`.
  Eigen::MatrixXd psd_block(std::size_t b) const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(double alpha);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(double alpha, AlgebraElement a) { return a *= alpha; }
  friend AlgebraElement operator*(AlgebraElement a, double alpha) { return a *= alpha; }
  friend AlgebraElement operator-(AlgebraElement a) { return a *= -1.0; }

 private:
  ConeSpec spec_;
  Eigen::VectorXd coords_;
};

struct SpectralDecomposition {
  /// Eigenvalues in ascending order, r of them.
  std::vector<double> eigenvalues;
  /// Primitive idempotents matching `eigenvalues`.
  std::vector<AlgebraElement> idempotents;

  AlgebraElement reconstruct() const;
};

/// Throws StructuralError unless both specs agree.
void require_same_spec(const AlgebraElement& x, const AlgebraElement& y);

AlgebraElement jordan_product(const AlgebraElement& x, const AlgebraElement& y);
double inner_product(const AlgebraElement& x, const AlgebraElement& y);
double norm(const AlgebraElement& x);
AlgebraElement identity_element(const ConeSpec& spec);
/// <e, x>, the trace of x.
double trace(const AlgebraElement& x);

SpectralDecomposition spectral_decompose(const AlgebraElement& x);
/// All eigenvalues, ascending, without forming idempotents.
std::vector<double> eigenvalues(const AlgebraElement& x);
double lambda_min(const AlgebraElement& x);
double lambda_max(const AlgebraElement& x);
/// Largest absolute eigenvalue.
double spectral_radius(const AlgebraElement& x);

/// Nearest point of the cone of squares: sum_i max(lambda_i, 0) c_i.
AlgebraElement cone_project(const AlgebraElement& x);

/// In-place cone projection of raw coordinates laid out by `spec`.
void cone_project_coords(const ConeSpec& spec, Eigen::Ref<Eigen::VectorXd> coords);

/// Minimum eigenvalue of raw coordinates laid out by `spec`.
double lambda_min_coords(const ConeSpec& spec, Eigen::Ref<const Eigen::VectorXd> coords);

}  // namespace rpcone
