#pragma once
// Random feasible and certified-infeasible instances.
#include <cstdint>
#include <string>

#include "json.hpp"
#include "rpcone/program.hpp"
#include "rpcone/solver.hpp"

namespace rpcone {

enum class CostKind { kIdentity, kRandom };
enum class Feasibility { kFeasible, kInfeasible };

std::string to_string(CostKind kind);
std::string to_string(Feasibility f);
CostKind cost_kind_from_string(const std::string& name);
Feasibility feasibility_from_string(const std::string& name);

struct GenSpec {
  ConeSpec cone = ConeSpec::psd(10);
  int m = 100;
  /// Fraction of structurally nonzero upper-triangle entries in each A_i.
  double density = 0.1;
  CostKind cost_kind = CostKind::kIdentity;
  Feasibility feasibility = Feasibility::kFeasible;
  std::uint64_t seed = 0;
  /// theta = theta_factor * <e, x0>.
  double theta_factor = 2.0;
  /// Gap lambda_max(N - nu_hat e) = -margin of the planted certificate.
  double margin = 0.1;
};

nlohmann::json gen_spec_to_json(const GenSpec& g);
/// Missing keys keep their defaults.
GenSpec gen_spec_from_json(const nlohmann::json& j);

/// Random element with exactly round(density * N) nonzero upper-triangle (or
/// coordinate) entries per block, uniform on [0, 1].
AlgebraElement random_sparse_element(const ConeSpec& spec, double density, std::uint64_t seed);

struct FeasibleInstance {
  ConicProgram program;
  /// Strictly interior point with A x0 = b and <e, x0> = theta / theta_factor.
  AlgebraElement witness;
};

/// x0 = y o y + delta e per block (G'G + delta I for Psd blocks, G uniform),
/// with delta = 0.1 times the block rank, rescaled to trace r; b = A x0.
FeasibleInstance generate_feasible(const GenSpec& spec);

struct InfeasibleInstance {
  ConicProgram program;
  Certificate certificate;
};

/// Plants a Farkas ray: y_hat uniform, nu_hat = max(0, lambda_max(N)) + margin
/// with N = sum_i y_hat_i A_i, and b = A x0 + alpha y_hat / ||y_hat||^2 where
/// x0 = theta c_max sits on the boundary at the top eigenvector of N and alpha
/// makes b'y_hat - theta nu_hat = 1. The returned certificate verifies exactly.
InfeasibleInstance generate_infeasible(const GenSpec& spec);

nlohmann::json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);

}  // namespace rpcone
