#include "rpcone/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rpcone/errors.hpp"

namespace rpcone {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

int psd_dim(int side) { return side * (side + 1) / 2; }

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> psd_eigen(
    Eigen::Ref<const Eigen::VectorXd> v, int side, bool vectors) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
      smat(v, side), vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
}

}  // namespace

int Block::dim() const {
  switch (kind) {
    case BlockKind::kOrthant:
    case BlockKind::kLorentz:
      return size;
    case BlockKind::kPsd:
      return psd_dim(size);
  }
  return 0;
}

int Block::degree() const {
  switch (kind) {
    case BlockKind::kOrthant:
      return size;
    case BlockKind::kLorentz:
      return 2;
    case BlockKind::kPsd:
      return size;
  }
  return 0;
}

std::string to_string(const Block& block) {
  switch (block.kind) {
    case BlockKind::kOrthant:
      return "orthant:" + std::to_string(block.size);
    case BlockKind::kLorentz:
      return "lorentz:" + std::to_string(block.size);
    case BlockKind::kPsd:
      return "psd:" + std::to_string(block.size);
  }
  return "?";
}

ConeSpec::ConeSpec(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw StructuralError("cone spec needs at least one block");
  offsets_.reserve(blocks_.size());
  for (const Block& b : blocks_) {
    if (b.size < 1) throw StructuralError("block size must be positive: " + rpcone::to_string(b));
    if (b.kind == BlockKind::kLorentz && b.size < 2)
      throw StructuralError("Lorentz block needs dimension >= 2");
    offsets_.push_back(dim_);
    dim_ += b.dim();
    degree_ += b.degree();
  }
}

Eigen::VectorXd ConeSpec::metric_weights() const {
  Eigen::VectorXd w(dim_);
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    w.segment(offsets_[b], blocks_[b].dim()).setConstant(blocks_[b].metric_weight());
  return w;
}

double ConeSpec::metric_sqrt_norm() const {
  double w = 0.0;
  for (const Block& b : blocks_) w = std::max(w, b.metric_weight());
  return std::sqrt(w);
}

std::string ConeSpec::to_string() const {
  std::ostringstream out;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b) out << ',';
    out << rpcone::to_string(blocks_[b]);
  }
  return out.str();
}

int psd_side_from_dim(int n) {
  if (n < 1) return -1;
  const int s = static_cast<int>(std::lround((std::sqrt(8.0 * n + 1.0) - 1.0) / 2.0));
  return psd_dim(s) == n ? s : -1;
}

Eigen::VectorXd svec(const Eigen::MatrixXd& m) {
  const int s = static_cast<int>(m.rows());
  if (m.cols() != s) throw StructuralError("svec needs a square matrix");
  Eigen::VectorXd v(psd_dim(s));
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < j; ++i) v(svec_index(i, j)) = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
    v(svec_index(j, j)) = m(j, j);
  }
  return v;
}

Eigen::MatrixXd smat(Eigen::Ref<const Eigen::VectorXd> v, int side) {
  if (v.size() != psd_dim(side)) throw StructuralError("smat: length does not match side");
  Eigen::MatrixXd m(side, side);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < j; ++i) {
      const double x = v(svec_index(i, j)) / kSqrt2;
      m(i, j) = x;
      m(j, i) = x;
    }
    m(j, j) = v(svec_index(j, j));
  }
  return m;
}

AlgebraElement::AlgebraElement(ConeSpec spec, Eigen::VectorXd coords)
    : spec_(std::move(spec)), coords_(std::move(coords)) {
  if (coords_.size() != spec_.dim())
    throw StructuralError("coordinate length " + std::to_string(coords_.size()) +
                          " does not match cone dimension " + std::to_string(spec_.dim()));
}

AlgebraElement AlgebraElement::zero(const ConeSpec& spec) {
  return AlgebraElement(spec, Eigen::VectorXd::Zero(spec.dim()));
}

Eigen::Ref<const Eigen::VectorXd> AlgebraElement::block(std::size_t b) const {
  return coords_.segment(spec_.offset(b), spec_.blocks()[b].dim());
}

Eigen::MatrixXd AlgebraElement::psd_block(std::size_t b) const {
  const Block& blk = spec_.blocks().at(b);
  if (blk.kind != BlockKind::kPsd) throw StructuralError("block is not Psd");
  return smat(block(b), blk.size);
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_same_spec(*this, other);
  coords_ += other.coords_;
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  require_same_spec(*this, other);
  coords_ -= other.coords_;
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(double alpha) {
  coords_ *= alpha;
  return *this;
}

void require_same_spec(const AlgebraElement& x, const AlgebraElement& y) {
  if (!(x.spec() == y.spec()))
    throw StructuralError("cone spec mismatch: " + x.spec().to_string() + " vs " +
                          y.spec().to_string());
}

AlgebraElement jordan_product(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_spec(x, y);
  const ConeSpec& spec = x.spec();
  Eigen::VectorXd out(spec.dim());
  for (std::size_t b = 0; b < spec.num_blocks(); ++b) {
    const Block& blk = spec.blocks()[b];
    const auto xb = x.block(b);
    const auto yb = y.block(b);
    auto ob = out.segment(spec.offset(b), blk.dim());
    switch (blk.kind) {
      case BlockKind::kOrthant:
        ob = xb.cwiseProduct(yb);
        break;
      case BlockKind::kLorentz: {
        const int k = blk.size;
        ob(0) = xb.dot(yb);
        ob.tail(k - 1) = xb(0) * yb.tail(k - 1) + yb(0) * xb.tail(k - 1);
        break;
      }
      case BlockKind::kPsd: {
        const Eigen::MatrixXd xm = smat(xb, blk.size);
        const Eigen::MatrixXd ym = smat(yb, blk.size);
        const Eigen::MatrixXd xy = xm * ym;
        ob = svec(0.5 * (xy + xy.transpose()));
        break;
      }
    }
  }
  return AlgebraElement(spec, std::move(out));
}

double inner_product(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_spec(x, y);
  const ConeSpec& spec = x.spec();
  double sum = 0.0;
  for (std::size_t b = 0; b < spec.num_blocks(); ++b)
    sum += spec.blocks()[b].metric_weight() * x.block(b).dot(y.block(b));
  return sum;
}

double norm(const AlgebraElement& x) { return std::sqrt(inner_product(x, x)); }

AlgebraElement identity_element(const ConeSpec& spec) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(spec.dim());
  for (std::size_t b = 0; b < spec.num_blocks(); ++b) {
    const Block& blk = spec.blocks()[b];
    auto eb = e.segment(spec.offset(b), blk.dim());
    switch (blk.kind) {
      case BlockKind::kOrthant:
        eb.setOnes();
        break;
      case BlockKind::kLorentz:
        eb(0) = 1.0;
        break;
      case BlockKind::kPsd:
        for (int j = 0; j < blk.size; ++j) eb(svec_index(j, j)) = 1.0;
        break;
    }
  }
  return AlgebraElement(spec, std::move(e));
}

double trace(const AlgebraElement& x) {
  const ConeSpec& spec = x.spec();
  double t = 0.0;
  for (std::size_t b = 0; b < spec.num_blocks(); ++b) {
    const Block& blk = spec.blocks()[b];
    const auto xb = x.block(b);
    switch (blk.kind) {
      case BlockKind::kOrthant:
        t += xb.sum();
        break;
      case BlockKind::kLorentz:
        t += 2.0 * xb(0);
        break;
      case BlockKind::kPsd:
        for (int j = 0; j < blk.size; ++j) t += xb(svec_index(j, j));
        break;
    }
  }
  return t;
}

AlgebraElement SpectralDecomposition::reconstruct() const {
  if (idempotents.empty()) throw StructuralError("empty decomposition");
  AlgebraElement sum = AlgebraElement::zero(idempotents.front().spec());
  for (std::size_t i = 0; i < idempotents.size(); ++i) sum += eigenvalues[i] * idempotents[i];
  return sum;
}

SpectralDecomposition spectral_decompose(const AlgebraElement& x) {
  const ConeSpec& spec = x.spec();
  struct Entry {
    double lambda;
    Eigen::VectorXd coords;
  };
  std::vector<Entry> entries;
  entries.reserve(spec.degree());

  auto embed = [&](std::size_t b, const Eigen::VectorXd& local) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(spec.dim());
    full.segment(spec.offset(b), local.size()) = local;
    return full;
  };

  for (std::size_t b = 0; b < spec.num_blocks(); ++b) {
    const Block& blk = spec.blocks()[b];
    const auto xb = x.block(b);
    switch (blk.kind) {
      case BlockKind::kOrthant:
        for (int i = 0; i < blk.size; ++i) {
          Eigen::VectorXd c = Eigen::VectorXd::Zero(blk.size);
          c(i) = 1.0;
          entries.push_back({xb(i), embed(b, c)});
        }
        break;
      case BlockKind::kLorentz: {
        const int k = blk.size;
        const double radius = xb.tail(k - 1).norm();
        Eigen::VectorXd u = Eigen::VectorXd::Zero(k - 1);
        if (radius > 0.0) {
          u = xb.tail(k - 1) / radius;
        } else {
          u(0) = 1.0;
        }
        Eigen::VectorXd lo(k), hi(k);
        lo << 0.5, -0.5 * u;
        hi << 0.5, 0.5 * u;
        entries.push_back({xb(0) - radius, embed(b, lo)});
        entries.push_back({xb(0) + radius, embed(b, hi)});
        break;
      }
      case BlockKind::kPsd: {
        const auto eig = psd_eigen(xb, blk.size, true);
        for (int i = 0; i < blk.size; ++i) {
          const Eigen::VectorXd q = eig.eigenvectors().col(i);
          entries.push_back({eig.eigenvalues()(i), embed(b, svec(q * q.transpose()))});
        }
        break;
      }
    }
  }

  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.lambda < b.lambda; });
  SpectralDecomposition out;
  out.eigenvalues.reserve(entries.size());
  out.idempotents.reserve(entries.size());
  for (Entry& e : entries) {
    out.eigenvalues.push_back(e.lambda);
    out.idempotents.emplace_back(spec, std::move(e.coords));
  }
  return out;
}

std::vector<double> eigenvalues(const AlgebraElement& x) {
  const ConeSpec& spec = x.spec();
  std::vector<double> out;
  out.reserve(spec.degree());
  for (std::size_t b = 0; b < spec.num_blocks(); ++b) {
    const Block& blk = spec.blocks()[b];
    const auto xb = x.block(b);
    switch (blk.kind) {
      case BlockKind::kOrthant:
        for (int i = 0; i < blk.size; ++i) out.push_back(xb(i));
        break;
      case BlockKind::kLorentz: {
        const double radius = xb.tail(blk.size - 1).norm();
        out.push_back(xb(0) - radius);
        out.push_back(xb(0) + radius);
        break;
      }
      case BlockKind::kPsd: {
        const auto eig = psd_eigen(xb, blk.size, false);
        for (int i = 0; i < blk.size; ++i) out.push_back(eig.eigenvalues()(i));
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double lambda_min(const AlgebraElement& x) { return lambda_min_coords(x.spec(), x.coords()); }

double lambda_max(const AlgebraElement& x) { return -lambda_min_coords(x.spec(), -x.coords()); }

double spectral_radius(const AlgebraElement& x) {
  return std::max(std::abs(lambda_min(x)), std::abs(lambda_max(x)));
}

double lambda_min_coords(const ConeSpec& spec, Eigen::Ref<const Eigen::VectorXd> coords) {
  if (coords.size() != spec.dim()) throw StructuralError("coordinate length mismatch");
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < spec.num_blocks(); ++b) {
    const Block& blk = spec.blocks()[b];
    const auto xb = coords.segment(spec.offset(b), blk.dim());
    switch (blk.kind) {
      case BlockKind::kOrthant:
        lo = std::min(lo, xb.minCoeff());
        break;
      case BlockKind::kLorentz:
        lo = std::min(lo, xb(0) - xb.tail(blk.size - 1).norm());
        break;
      case BlockKind::kPsd:
        lo = std::min(lo, psd_eigen(xb, blk.size, false).eigenvalues()(0));
        break;
    }
  }
  return lo;
}

void cone_project_coords(const ConeSpec& spec, Eigen::Ref<Eigen::VectorXd> coords) {
  if (coords.size() != spec.dim()) throw StructuralError("coordinate length mismatch");
  for (std::size_t b = 0; b < spec.num_blocks(); ++b) {
    const Block& blk = spec.blocks()[b];
    auto xb = coords.segment(spec.offset(b), blk.dim());
    switch (blk.kind) {
      case BlockKind::kOrthant:
        xb = xb.cwiseMax(0.0);
        break;
      case BlockKind::kLorentz: {
        const int k = blk.size;
        const double t = xb(0);
        const double radius = xb.tail(k - 1).norm();
        if (radius <= t) break;
        if (radius <= -t) {
          xb.setZero();
          break;
        }
        const double scale = 0.5 * (t + radius);
        xb(0) = scale;
        xb.tail(k - 1) *= scale / radius;
        break;
      }
      case BlockKind::kPsd: {
        const auto eig = psd_eigen(xb, blk.size, true);
        const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
        if (clipped == eig.eigenvalues()) break;
        const Eigen::MatrixXd& q = eig.eigenvectors();
        xb = svec(q * clipped.asDiagonal() * q.transpose());
        break;
      }
    }
  }
}

AlgebraElement cone_project(const AlgebraElement& x) {
  Eigen::VectorXd coords = x.coords();
  cone_project_coords(x.spec(), coords);
  return AlgebraElement(x.spec(), std::move(coords));
}

}  // namespace rpcone
