#include "rpcone/instances.hpp"

#include <cmath>
#include <numeric>

#include "rpcone/errors.hpp"
#include "rpcone/io.hpp"
#include "rpcone/rng.hpp"

namespace rpcone {

std::string to_string(CostKind kind) { return kind == CostKind::kIdentity ? "identity" : "random"; }
std::string to_string(Feasibility f) { return f == Feasibility::kFeasible ? "feasible" : "infeasible"; }

CostKind cost_kind_from_string(const std::string& name) {
  if (name == "identity") return CostKind::kIdentity;
  if (name == "random") return CostKind::kRandom;
  throw ParameterError("unknown cost kind '" + name + "'");
}

Feasibility feasibility_from_string(const std::string& name) {
  if (name == "feasible") return Feasibility::kFeasible;
  if (name == "infeasible") return Feasibility::kInfeasible;
  throw ParameterError("unknown feasibility '" + name + "'");
}

nlohmann::json gen_spec_to_json(const GenSpec& g) {
  return {{"cone", cone_to_json(g.cone)},
          {"m", g.m},
          {"density", g.density},
          {"cost", to_string(g.cost_kind)},
          {"feasibility", to_string(g.feasibility)},
          {"seed", g.seed},
          {"theta_factor", g.theta_factor},
          {"margin", g.margin}};
}

GenSpec gen_spec_from_json(const nlohmann::json& j) {
  GenSpec g;
  try {
    if (j.contains("cone")) {
      const auto& c = j.at("cone");
      g.cone = c.is_string() ? parse_cone(c.get<std::string>()) : cone_from_json(c);
    }
    g.m = j.value("m", g.m);
    g.density = j.value("density", g.density);
    if (j.contains("cost")) g.cost_kind = cost_kind_from_string(j.at("cost").get<std::string>());
    if (j.contains("feasibility"))
      g.feasibility = feasibility_from_string(j.at("feasibility").get<std::string>());
    g.seed = j.value("seed", g.seed);
    g.theta_factor = j.value("theta_factor", g.theta_factor);
    g.margin = j.value("margin", g.margin);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed generator spec: ") + e.what());
  }
  return g;
}

namespace {

void validate(const GenSpec& g) {
  if (g.m < 1) throw ParameterError("m must be positive");
  if (!(g.density > 0.0 && g.density <= 1.0)) throw ParameterError("density must lie in (0, 1]");
  if (!(g.theta_factor > 1.0)) throw ParameterError("theta_factor must exceed 1");
  if (!(g.margin > 0.0)) throw ParameterError("margin must be positive");
}

// Indices of `count` distinct slots out of `total`, by a partial shuffle.
std::vector<int> choose_slots(int total, int count, SplitMix64& rng) {
  std::vector<int> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < count; ++k) {
    const int pick = k + static_cast<int>(rng.uniform() * (total - k));
    std::swap(idx[k], idx[std::min(pick, total - 1)]);
  }
  idx.resize(count);
  return idx;
}

int nonzero_count(int total, double density) {
  return std::clamp(static_cast<int>(std::lround(density * total)), 1, total);
}

double block_delta(const Block& b) { return b.kind == BlockKind::kOrthant ? 0.1 : 0.1 * b.degree(); }

Eigen::VectorXd witness_coords(const ConeSpec& spec, SplitMix64& rng) {
  Eigen::VectorXd out(spec.dim());
  for (std::size_t bi = 0; bi < spec.num_blocks(); ++bi) {
    const Block& b = spec.blocks()[bi];
    auto seg = out.segment(spec.offset(bi), b.dim());
    const double delta = block_delta(b);
    switch (b.kind) {
      case BlockKind::kOrthant:
        for (int i = 0; i < b.size; ++i) {
          const double y = rng.uniform();
          seg(i) = y * y + delta;
        }
        break;
      case BlockKind::kLorentz: {
        Eigen::VectorXd y(b.size);
        for (int i = 0; i < b.size; ++i) y(i) = rng.uniform();
        seg(0) = y.squaredNorm() + delta;
        seg.tail(b.size - 1) = 2.0 * y(0) * y.tail(b.size - 1);
        break;
      }
      case BlockKind::kPsd: {
        Eigen::MatrixXd g(b.size, b.size);
        for (int j = 0; j < b.size; ++j)
          for (int i = 0; i < b.size; ++i) g(i, j) = rng.uniform();
        Eigen::MatrixXd x = g.transpose() * g;
        x.diagonal().array() += delta;
        seg = svec(x);
        break;
      }
    }
  }
  return out;
}

AlgebraElement cost_element(const GenSpec& g) {
  if (g.cost_kind == CostKind::kIdentity) return identity_element(g.cone);
  return random_sparse_element(g.cone, 1.0, derive_seed(g.seed, static_cast<std::uint64_t>(g.m) + 1));
}

std::vector<AlgebraElement> constraint_elements(const GenSpec& g) {
  std::vector<AlgebraElement> rows;
  rows.reserve(g.m);
  for (int i = 0; i < g.m; ++i) rows.push_back(random_sparse_element(g.cone, g.density, derive_seed(g.seed, i)));
  return rows;
}

}  // namespace

AlgebraElement random_sparse_element(const ConeSpec& spec, double density, std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) throw ParameterError("density must lie in (0, 1]");
  SplitMix64 rng(seed);
  Eigen::VectorXd coords = Eigen::VectorXd::Zero(spec.dim());
  for (std::size_t bi = 0; bi < spec.num_blocks(); ++bi) {
    const Block& b = spec.blocks()[bi];
    auto seg = coords.segment(spec.offset(bi), b.dim());
    const int total = b.dim();
    const std::vector<int> slots = choose_slots(total, nonzero_count(total, density), rng);
    if (b.kind != BlockKind::kPsd) {
      for (int k : slots) seg(k) = rng.uniform();
      continue;
    }
    // Slot k is the k-th upper-triangle entry in vectorization order.
    for (int k : slots) {
      int j = 0;
      while ((j + 1) * (j + 2) / 2 <= k) ++j;
      const int i = k - j * (j + 1) / 2;
      seg(k) = (i == j ? 1.0 : std::sqrt(2.0)) * rng.uniform();
    }
  }
  return AlgebraElement(spec, std::move(coords));
}

FeasibleInstance generate_feasible(const GenSpec& g) {
  validate(g);
  SplitMix64 rng(derive_seed(g.seed, static_cast<std::uint64_t>(g.m)));
  AlgebraElement x0(g.cone, witness_coords(g.cone, rng));
  x0 *= g.cone.degree() / trace(x0);
  const auto rows = constraint_elements(g);
  ConicProgram shell(g.cone, rows, Eigen::VectorXd::Zero(g.m), cost_element(g), 1.0);
  Eigen::VectorXd b = shell.apply(x0);
  ConicProgram p(g.cone, shell.constraint_coords(), std::move(b), shell.cost().coords(),
                 g.theta_factor * trace(x0));
  return {std::move(p), std::move(x0)};
}

InfeasibleInstance generate_infeasible(const GenSpec& g) {
  validate(g);
  const auto rows = constraint_elements(g);
  const double theta = g.theta_factor * g.cone.degree();
  ConicProgram shell(g.cone, rows, Eigen::VectorXd::Zero(g.m), cost_element(g), theta);

  Eigen::VectorXd y_hat(g.m);
  for (std::uint64_t attempt = 0;; ++attempt) {
    SplitMix64 rng(derive_seed(g.seed, static_cast<std::uint64_t>(g.m) + 2 + attempt));
    for (int i = 0; i < g.m; ++i) y_hat(i) = rng.uniform();
    if (y_hat.norm() > 1e-8) break;
  }
  const AlgebraElement n_elem = shell.adjoint(y_hat);
  const SpectralDecomposition sd = spectral_decompose(n_elem);
  const double top = sd.eigenvalues.back();
  const double nu_hat = std::max(0.0, top) + g.margin;

  const AlgebraElement x0 = theta * sd.idempotents.back();
  const Eigen::VectorXd ax0 = shell.apply(x0);
  const double alpha = 1.0 + theta * nu_hat - ax0.dot(y_hat);
  Eigen::VectorXd b = ax0 + (alpha / y_hat.squaredNorm()) * y_hat;

  ConicProgram p(g.cone, shell.constraint_coords(), std::move(b), shell.cost().coords(), theta);
  Certificate cert;
  cert.y_hat = y_hat;
  cert.nu_hat = nu_hat;
  cert.normalization = p.rhs().dot(y_hat) - theta * nu_hat;
  cert.slack_lambda_max = lambda_max(n_elem - nu_hat * identity_element(g.cone));
  return {std::move(p), std::move(cert)};
}

nlohmann::json certificate_to_json(const Certificate& c) {
  return {{"y_hat", std::vector<double>(c.y_hat.data(), c.y_hat.data() + c.y_hat.size())},
          {"nu_hat", c.nu_hat},
          {"normalization", c.normalization},
          {"slack_lambda_max", c.slack_lambda_max}};
}

Certificate certificate_from_json(const nlohmann::json& j) {
  try {
    Certificate c;
    const auto y = j.at("y_hat").get<std::vector<double>>();
    c.y_hat = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
    c.nu_hat = j.at("nu_hat").get<double>();
    c.normalization = j.value("normalization", 0.0);
    c.slack_lambda_max = j.value("slack_lambda_max", 0.0);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace rpcone
