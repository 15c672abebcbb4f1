#include "rpcone/solver.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "rpcone/errors.hpp"

namespace rpcone {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kPrimalInfeasible:
      return "primal_infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kMaxIter:
      return "max_iter";
    case SolveStatus::kNumerical:
      return "numerical";
  }
  return "?";
}

bool verify_certificate(const ConicProgram& p, const Certificate& cert, double tol) {
  if (cert.y_hat.size() != p.num_constraints()) throw StructuralError("certificate has the wrong length");
  if (!cert.y_hat.allFinite() || !std::isfinite(cert.nu_hat) || cert.nu_hat < 0.0) return false;
  const double normalization = p.rhs().dot(cert.y_hat) - p.trace_bound() * cert.nu_hat;
  if (!(normalization >= 1.0 - tol)) return false;
  const AlgebraElement aggregate = p.adjoint(cert.y_hat) - cert.nu_hat * identity_element(p.spec());
  return lambda_max(aggregate) <= tol;
}

std::optional<Certificate> repair_certificate(const ConicProgram& p, const Eigen::VectorXd& y, double nu) {
  if (!y.allFinite() || !std::isfinite(nu)) return std::nullopt;
  const double theta = p.trace_bound();
  Eigen::VectorXd yh = y;
  double nh = std::max(nu, 0.0);
  double eta = p.rhs().dot(yh) - theta * nh;
  if (!(eta > 0.0)) return std::nullopt;
  yh /= eta;
  nh /= eta;
  const AlgebraElement e = identity_element(p.spec());
  const double excess = lambda_max(p.adjoint(yh) - nh * e);
  if (excess > 0.0) nh += excess;
  eta = p.rhs().dot(yh) - theta * nh;
  if (!(eta > 0.0)) return std::nullopt;
  yh /= eta;
  nh /= eta;
  Certificate cert;
  cert.normalization = p.rhs().dot(yh) - theta * nh;
  cert.slack_lambda_max = lambda_max(p.adjoint(yh) - nh * e);
  cert.y_hat = std::move(yh);
  cert.nu_hat = nh;
  return cert;
}

namespace {

using Clock = std::chrono::steady_clock;

// Scaled data of min c'x s.t. A x = b, x in K x R_+ and the factorization used
// to apply (I + Q)^-1, Q being the skew-symmetric embedding matrix
//   [ 0  -A'  c ]
//   [ A   0  -b ]
//   [-c'  b'  0 ].
class Embedding {
 public:
  Embedding(const ConicProgram& p, bool equilibrate) {
    const int n0 = p.dim();
    const int m0 = p.num_constraints();
    n_ = n0 + 1;
    m_ = m0 + 1;
    std::vector<Block> blocks = p.spec().blocks();
    blocks.push_back({BlockKind::kOrthant, 1});
    cone_ = ConeSpec(std::move(blocks));

    const Eigen::VectorXd w = p.spec().metric_weights();
    a_raw_ = Eigen::MatrixXd::Zero(m_, n_);
    a_raw_.topLeftCorner(m0, n0) = p.constraint_coords() * w.asDiagonal();
    a_raw_.block(m0, 0, 1, n0) = w.cwiseProduct(identity_element(p.spec()).coords()).transpose();
    a_raw_(m0, n0) = 1.0;
    b_raw_.resize(m_);
    b_raw_ << p.rhs(), p.trace_bound();
    c_raw_ = Eigen::VectorXd::Zero(n_);
    c_raw_.head(n0) = w.cwiseProduct(p.cost().coords());

    row_scale_ = Eigen::VectorXd::Ones(m_);
    col_scale_ = Eigen::VectorXd::Ones(n_);
    a_ = a_raw_;
    if (equilibrate) ruiz();
    b_ = row_scale_.cwiseProduct(b_raw_);
    c_ = col_scale_.cwiseProduct(c_raw_);
    const double nb = b_.norm();
    const double nc = c_.norm();
    sb_ = nb > 1e-8 ? 1.0 / nb : 1.0;
    sc_ = nc > 1e-8 ? 1.0 / nc : 1.0;
    b_ *= sb_;
    c_ *= sc_;

    factor_primal_ = n_ <= m_;
    if (factor_primal_) {
      Eigen::MatrixXd gram = a_.transpose() * a_;
      gram.diagonal().array() += 1.0;
      llt_.compute(gram);
    } else {
      Eigen::MatrixXd gram = a_ * a_.transpose();
      gram.diagonal().array() += 1.0;
      llt_.compute(gram);
    }
    ok_ = llt_.info() == Eigen::Success;

    Eigen::VectorXd h(n_ + m_);
    h << c_, -b_;
    g_ = solve_m(h);
    hg_ = h.dot(g_);
  }

  bool ok() const { return ok_; }
  int n() const { return n_; }
  int m() const { return m_; }
  int size() const { return n_ + m_ + 1; }
  const ConeSpec& cone() const { return cone_; }

  // z = (I + Q)^-1 w.
  Eigen::VectorXd solve_iq(const Eigen::VectorXd& w) const {
    Eigen::VectorXd z(size());
    const Eigen::VectorXd p = solve_m(w.head(n_ + m_));
    Eigen::VectorXd h(n_ + m_);
    h << c_, -b_;
    const double tau = (w(n_ + m_) + h.dot(p)) / (1.0 + hg_);
    z.head(n_ + m_) = p - g_ * tau;
    z(n_ + m_) = tau;
    return z;
  }

  // Unscaled primal/dual from scaled iterates (already divided by tau).
  Eigen::VectorXd unscale_x(const Eigen::VectorXd& x) const { return col_scale_.cwiseProduct(x) / sb_; }
  Eigen::VectorXd unscale_y(const Eigen::VectorXd& y) const { return row_scale_.cwiseProduct(y) / sc_; }
  Eigen::VectorXd unscale_s(const Eigen::VectorXd& s) const {
    return s.cwiseQuotient(col_scale_) / sc_;
  }

  const Eigen::MatrixXd& a_raw() const { return a_raw_; }
  const Eigen::VectorXd& b_raw() const { return b_raw_; }
  const Eigen::VectorXd& c_raw() const { return c_raw_; }

 private:
  // [I -A'; A I]^-1 applied to (a, beta).
  Eigen::VectorXd solve_m(const Eigen::VectorXd& rhs) const {
    const auto a = rhs.head(n_);
    const auto beta = rhs.tail(m_);
    Eigen::VectorXd out(n_ + m_);
    if (factor_primal_) {
      Eigen::VectorXd x = llt_.solve(a + a_.transpose() * beta);
      out.tail(m_) = beta - a_ * x;
      out.head(n_) = std::move(x);
    } else {
      Eigen::VectorXd y = llt_.solve(beta - a_ * a);
      out.head(n_) = a + a_.transpose() * y;
      out.tail(m_) = std::move(y);
    }
    return out;
  }

  // Ruiz equilibration; columns of a Lorentz or Psd block share one factor so
  // the scaled variable stays in the same cone.
  void ruiz() {
    std::vector<std::pair<int, int>> groups;
    for (std::size_t bi = 0; bi < cone_.num_blocks(); ++bi) {
      const Block& blk = cone_.blocks()[bi];
      const int off = cone_.offset(bi);
      if (blk.kind == BlockKind::kOrthant) {
        for (int j = 0; j < blk.dim(); ++j) groups.emplace_back(off + j, 1);
      } else {
        groups.emplace_back(off, blk.dim());
      }
    }
    auto clamp = [](double v) { return std::clamp(v, 1e-4, 1e4); };
    for (int pass = 0; pass < 25; ++pass) {
      for (int i = 0; i < m_; ++i) {
        const double r = a_.row(i).lpNorm<Eigen::Infinity>();
        if (r < 1e-12) continue;
        const double f = clamp(1.0 / std::sqrt(r));
        a_.row(i) *= f;
        row_scale_(i) *= f;
      }
      for (const auto& [start, len] : groups) {
        const double r = a_.middleCols(start, len).lpNorm<Eigen::Infinity>();
        if (r < 1e-12) continue;
        const double f = clamp(1.0 / std::sqrt(r));
        a_.middleCols(start, len) *= f;
        col_scale_.segment(start, len) *= f;
      }
    }
  }

  int n_ = 0;
  int m_ = 0;
  ConeSpec cone_;
  Eigen::MatrixXd a_raw_, a_;
  Eigen::VectorXd b_raw_, c_raw_, b_, c_;
  Eigen::VectorXd row_scale_, col_scale_;
  double sb_ = 1.0, sc_ = 1.0;
  bool factor_primal_ = true;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd g_;
  double hg_ = 0.0;
  bool ok_ = false;
};

// Type-II Anderson acceleration with a residual safeguard.
class Anderson {
 public:
  explicit Anderson(int memory) : memory_(memory) {}

  void reset() {
    dfs_.clear();
    dgs_.clear();
    has_prev_ = false;
  }

  // Records (f = F(z) - z, F(z)) and returns the extrapolated point, or F(z)
  // while the history is empty.
  Eigen::VectorXd extrapolate(const Eigen::VectorXd& f, const Eigen::VectorXd& fz) {
    if (has_prev_) {
      dfs_.push_back(f - prev_f_);
      dgs_.push_back(fz - prev_fz_);
      if (static_cast<int>(dfs_.size()) > memory_) {
        dfs_.pop_front();
        dgs_.pop_front();
      }
    }
    prev_f_ = f;
    prev_fz_ = fz;
    has_prev_ = true;
    if (dfs_.empty()) return fz;
    const int k = static_cast<int>(dfs_.size());
    Eigen::MatrixXd df(f.size(), k), dg(f.size(), k);
    for (int i = 0; i < k; ++i) {
      df.col(i) = dfs_[i];
      dg.col(i) = dgs_[i];
    }
    Eigen::MatrixXd normal = df.transpose() * df;
    normal.diagonal().array() += 1e-10 * std::max(1.0, normal.diagonal().maxCoeff());
    const Eigen::VectorXd gamma = normal.ldlt().solve(df.transpose() * f);
    if (!gamma.allFinite()) {
      reset();
      return fz;
    }
    return fz - dg * gamma;
  }

 private:
  int memory_;
  std::deque<Eigen::VectorXd> dfs_, dgs_;
  Eigen::VectorXd prev_f_, prev_fz_;
  bool has_prev_ = false;
};

struct Candidate {
  AlgebraElement x;
  Eigen::VectorXd y;
  double nu = 0.0;
  double objective = 0.0;
  SolveResiduals res;
  double trace = 0.0;
};

// Raises nu until c - sum y_i A_i + nu e is in the cone; the shift is exact
// because e has all eigenvalues equal to one.
Candidate polish(const ConicProgram& p, const Eigen::VectorXd& x_aug, const Eigen::VectorXd& y_aug) {
  const int n0 = p.dim();
  const int m0 = p.num_constraints();
  Candidate out;
  out.x = AlgebraElement(p.spec(), x_aug.head(n0));
  out.y = y_aug.head(m0);
  out.nu = std::max(0.0, -y_aug(m0));
  const double slack_min = lambda_min(dual_slack(p, out.y, out.nu));
  if (slack_min < 0.0) out.nu -= slack_min;
  out.objective = p.objective(out.x);
  out.trace = trace(out.x);
  const Eigen::VectorXd eq = p.apply(out.x) - p.rhs();
  const double over = std::max(0.0, out.trace - p.trace_bound());
  out.res.primal_eq = std::sqrt(eq.squaredNorm() + over * over);
  out.res.dual_cone = std::max(0.0, -lambda_min(dual_slack(p, out.y, out.nu)));
  out.res.gap = std::abs(out.objective - (p.rhs().dot(out.y) - p.trace_bound() * out.nu));
  return out;
}

bool meets_tolerance(const ConicProgram& p, const Candidate& c, double tol) {
  return c.res.primal_eq <= tol * (1.0 + p.rhs().norm()) && c.res.dual_cone <= tol &&
         c.res.gap <= tol * (1.0 + std::abs(c.objective)) &&
         c.trace <= p.trace_bound() + tol * std::max(1.0, p.trace_bound());
}

}  // namespace

SolveResult SplittingSolver::solve(const ConicProgram& p, const SolverOptions& opts) const {
  const auto start = Clock::now();
  SolveResult result;
  result.primal = AlgebraElement::zero(p.spec());
  result.dual_y = Eigen::VectorXd::Zero(p.num_constraints());
  auto finish = [&]() -> SolveResult {
    result.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
  };

  const Embedding emb(p, opts.equilibrate);
  if (!emb.ok()) {
    result.status = SolveStatus::kNumerical;
    return finish();
  }
  const int n = emb.n();
  const int m = emb.m();
  const int len = emb.size();
  const double alpha = opts.relaxation;

  // z = (u, v), u = (x, y, tau) in K x R^m x R_+, v = (s, r, kappa).
  Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * len);
  z(len - 1) = 1.0;
  z(2 * len - 1) = 1.0;

  auto step = [&](const Eigen::VectorXd& zin) {
    const auto u = zin.head(len);
    const auto v = zin.tail(len);
    const Eigen::VectorXd ut = emb.solve_iq(u + v);
    const Eigen::VectorXd relaxed = alpha * ut + (1.0 - alpha) * u;
    Eigen::VectorXd out(2 * len);
    auto un = out.head(len);
    un = relaxed - v;
    cone_project_coords(emb.cone(), un.head(n));
    un(len - 1) = std::max(0.0, un(len - 1));
    out.tail(len) = v - relaxed + un;
    return out;
  };

  const double b_norm = emb.b_raw().norm();
  const double c_norm = emb.c_raw().norm();
  const double tol = opts.tol;
  Anderson anderson(std::max(opts.anderson_memory, 1));
  const bool use_aa = opts.anderson_memory > 0;

  Eigen::VectorXd fz = step(z);
  Eigen::VectorXd f = fz - z;
  int iter = 1;
  while (iter < opts.max_iter) {
    if (use_aa) {
      const Eigen::VectorXd za = anderson.extrapolate(f, fz);
      Eigen::VectorXd fza = step(za);
      ++iter;
      const Eigen::VectorXd fa = fza - za;
      if (fza.allFinite() && fa.norm() <= f.norm()) {
        z = za;
        fz = std::move(fza);
        f = fa;
      } else {
        anderson.reset();
        z = fz;
        fz = step(z);
        ++iter;
        f = fz - z;
      }
    } else {
      z = fz;
      fz = step(z);
      ++iter;
      f = fz - z;
    }

    if (!fz.allFinite()) {
      result.status = SolveStatus::kNumerical;
      result.iterations = iter;
      return finish();
    }
    if (iter % opts.check_every != 0 && iter < opts.max_iter) continue;

    const auto u = fz.head(len);
    const auto v = fz.tail(len);
    const double tau = u(len - 1);
    const double kappa = v(len - 1);

    if (tau > 1e-12) {
      const Eigen::VectorXd x = emb.unscale_x(u.head(n) / tau);
      const Eigen::VectorXd y = emb.unscale_y(u.segment(n, m) / tau);
      const Eigen::VectorXd s = emb.unscale_s(v.head(n) / tau);
      const double pres = (emb.a_raw() * x - emb.b_raw()).norm();
      const double dres = (emb.c_raw() - emb.a_raw().transpose() * y - s).norm();
      const double cx = emb.c_raw().dot(x);
      const double by = emb.b_raw().dot(y);
      if (pres <= tol * (1.0 + b_norm) && dres <= tol * (1.0 + c_norm) &&
          std::abs(cx - by) <= tol * (1.0 + std::abs(cx) + std::abs(by))) {
        Candidate cand = polish(p, x, y);
        if (meets_tolerance(p, cand, tol)) {
          result.status = SolveStatus::kOptimal;
          result.primal = std::move(cand.x);
          result.dual_y = std::move(cand.y);
          result.dual_nu = cand.nu;
          result.objective = cand.objective;
          result.residuals = cand.res;
          result.iterations = iter;
          return finish();
        }
      }
    }

    if (tau < kappa) {
      const Eigen::VectorXd ydir = emb.unscale_y(u.segment(n, m));
      if (emb.b_raw().dot(ydir) > 0.0) {
        auto cert = repair_certificate(p, ydir.head(m - 1), -ydir(m - 1));
        if (cert && verify_certificate(p, *cert, 1e-6)) {
          result.status = SolveStatus::kPrimalInfeasible;
          result.objective = std::numeric_limits<double>::infinity();
          result.dual_y = cert->y_hat;
          result.dual_nu = cert->nu_hat;
          result.certificate = std::move(cert);
          result.iterations = iter;
          return finish();
        }
      }
      const Eigen::VectorXd xdir = emb.unscale_x(u.head(n));
      const double cx = emb.c_raw().dot(xdir);
      if (cx < 0.0) {
        const Eigen::VectorXd ray = xdir / -cx;
        if ((emb.a_raw() * ray).norm() <= tol * (1.0 + ray.norm())) {
          result.status = SolveStatus::kUnbounded;
          result.objective = -std::numeric_limits<double>::infinity();
          result.primal = AlgebraElement(p.spec(), ray.head(n - 1));
          result.iterations = iter;
          return finish();
        }
      }
    }
  }

  // Budget exhausted: report the current iterate. An iterate drifting towards
  // the infeasibility ray without a verified certificate is ambiguous.
  result.iterations = iter;
  const auto u = fz.head(len);
  const auto v = fz.tail(len);
  const double tau = u(len - 1);
  const double kappa = v(len - 1);
  if (tau > 1e-12 && tau >= kappa) {
    Candidate cand = polish(p, emb.unscale_x(u.head(n) / tau), emb.unscale_y(u.segment(n, m) / tau));
    result.status = SolveStatus::kMaxIter;
    result.primal = std::move(cand.x);
    result.dual_y = std::move(cand.y);
    result.dual_nu = cand.nu;
    result.objective = cand.objective;
    result.residuals = cand.res;
  } else {
    result.status = SolveStatus::kNumerical;
  }
  return finish();
}

namespace {

struct Registry {
  std::shared_mutex mutex;
  std::map<std::string, std::shared_ptr<const Solver>> solvers{
      {"builtin", std::make_shared<SplittingSolver>()}};
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_solver(const std::string& name, std::shared_ptr<const Solver> solver) {
  if (!solver) throw ParameterError("cannot register a null solver");
  Registry& r = registry();
  std::unique_lock lock(r.mutex);
  r.solvers[name] = std::move(solver);
}

std::shared_ptr<const Solver> solver_registry(const std::string& name) {
  Registry& r = registry();
  std::shared_lock lock(r.mutex);
  const auto it = r.solvers.find(name);
  if (it == r.solvers.end()) throw LookupError("unknown solver '" + name + "'");
  return it->second;
}

std::vector<std::string> registered_solvers() {
  Registry& r = registry();
  std::shared_lock lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [name, solver] : r.solvers) names.push_back(name);
  return names;
}

SolveResult solve(const ConicProgram& p, const SolverOptions& opts) {
  return solver_registry(opts.solver)->solve(p, opts);
}

}  // namespace rpcone
