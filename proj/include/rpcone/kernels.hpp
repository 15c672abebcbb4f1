#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp` that must return
// bit-identical results for any thread count: randomness is drawn per row or
// per draw from `derive_seed(seed, index)`, and every output element is
// reduced in a fixed order.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace rpcone {

enum class SketchFamily { kAchlioptasSparse, kGaussian };

/// Supremum of g . x over some set, for a direction g. Must be thread-safe.
using SupremumFn = std::function<double(const Eigen::VectorXd& g)>;

namespace kernels {

namespace serial {

/// d x m sketch entries. Row k draws from derive_seed(seed, k).
Eigen::MatrixXd fill_sketch(SketchFamily family, int d, int m, double density, std::uint64_t seed);
/// Rows of T * A, skipping zero entries of T.
Eigen::MatrixXd aggregate_rows(const Eigen::MatrixXd& t, const Eigen::MatrixXd& a);
/// ||T x_j||^2 / ||x_j||^2 for each column x_j (1 for a zero column).
std::vector<double> squared_norm_ratios(const Eigen::MatrixXd& t, const Eigen::MatrixXd& points);
/// sup(g_j) for N standard normal g_j in R^dim; g_j from derive_seed(seed, j).
std::vector<double> gaussian_sup_draws(int dim, const SupremumFn& sup, int draws, std::uint64_t seed);

}  // namespace serial

namespace omp {

Eigen::MatrixXd fill_sketch(SketchFamily family, int d, int m, double density, std::uint64_t seed);
Eigen::MatrixXd aggregate_rows(const Eigen::MatrixXd& t, const Eigen::MatrixXd& a);
std::vector<double> squared_norm_ratios(const Eigen::MatrixXd& t, const Eigen::MatrixXd& points);
std::vector<double> gaussian_sup_draws(int dim, const SupremumFn& sup, int draws, std::uint64_t seed);

}  // namespace omp

}  // namespace kernels
}  // namespace rpcone
