#pragma once
// Batch experiments: original vs projected solves, infeasibility detection
// trials, and their tabular output.
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpcone/bounds.hpp"
#include "rpcone/instances.hpp"
#include "rpcone/sketch.hpp"
#include "rpcone/solver.hpp"

namespace rpcone {

enum class OutputFormat { kCsv, kJson };

OutputFormat output_format_from_string(const std::string& name);

struct ExperimentConfig {
  /// Instance templates; each yields `trials` instances with derived seeds.
  std::vector<GenSpec> gen;
  /// Native JSON instances, each used once.
  std::vector<std::filesystem::path> instance_files;
  double epsilon = 0.2;
  /// Extra values swept by the infeasibility trial (defaults to {epsilon}).
  std::vector<double> epsilons;
  double c0 = kDefaultC0;
  std::optional<int> d_override;
  double sketch_density = kDefaultDensity;
  SketchFamily family = SketchFamily::kAchlioptasSparse;
  int trials = 1;
  SolverOptions solver;
  double u = kDefaultU;
  double c2 = kDefaultC2;
  double c_tilde = kDefaultCTilde;
  /// Gaussian draws for the width of the unit cone slice.
  int width_draws = 200;
  OutputFormat format = OutputFormat::kCsv;
  std::optional<std::filesystem::path> output;
  std::uint64_t seed = 0;
  /// Wall-clock columns are left empty when false, making output byte-stable.
  bool record_timing = true;

  void validate() const;
};

/// Keys mirror the field names; "gen" is a list of generator specs and
/// "instances" a list of paths. Missing keys keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

/// One instance of the batch in deterministic order.
struct BatchItem {
  std::string id;
  std::uint64_t seed = 0;
  std::optional<GenSpec> gen;
  std::optional<std::filesystem::path> file;
};

std::vector<BatchItem> expand_batch(const ExperimentConfig& config);

struct PipelineRow {
  std::string instance;
  std::uint64_t seed = 0;
  /// "ok", or the first failing stage's solver status, or "error".
  std::string outcome = "ok";
  std::string message;
  std::string status_p;
  std::string status_pt;
  double density = ErrorReport::kNaN;
  double value_retrieved = ErrorReport::kNaN;
  double rel_err_pt = ErrorReport::kNaN;
  double rel_err_retrieved = ErrorReport::kNaN;
  double residual_retrieved = ErrorReport::kNaN;
  bool rank_deficient = false;
  int iterations_p = 0;
  int iterations_pt = 0;
  double cpu = ErrorReport::kNaN;
  double cpu_t = ErrorReport::kNaN;
  bool numerical = false;
  ErrorReport report;
  /// Dual of (P_T) lifted back, and the minimum eigenvalue of its slack in (D).
  Eigen::VectorXd lifted_y;
  double lifted_nu = 0.0;
  double lifted_slack_lambda_min = ErrorReport::kNaN;
};

/// (a - b) / max(|a|, |b|), 0 when both vanish.
double relative_error(double a, double b);

/// Runs one feasible-instance experiment: solve (P); then sample T, project,
/// solve (P_T) and retrieve (the cpu_T steps); then evaluate the bounds.
PipelineRow run_pipeline_instance(const ConicProgram& p, const std::string& id, std::uint64_t seed,
                                  const ExperimentConfig& config);

std::vector<PipelineRow> run_pipeline(const ExperimentConfig& config);

struct DetectionRow {
  std::string instance;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  int d = 0;
  std::string status;
  bool detected = false;
  bool numerical = false;
  double condition_lhs = ErrorReport::kNaN;
  bool condition_holds = false;
  std::string message;
};

struct DetectionSummary {
  double epsilon = 0.0;
  int instances = 0;
  int detected = 0;
  int numerical = 0;
  int condition_holds = 0;
  double rate() const { return instances ? static_cast<double>(detected) / instances : 0.0; }
};

struct DetectionTable {
  std::vector<DetectionRow> rows;
  std::vector<DetectionSummary> summary;
};

/// Solves the projected program of every infeasible instance at every epsilon.
/// File instances without a stored certificate get one from solving (P).
DetectionTable run_infeasibility_trial(const ExperimentConfig& config);

/// Largest epsilon with eps ||y_hat|| (||b|| + opnorm) < 1 on every instance.
double largest_condition_epsilon(const std::vector<InfeasibleInstance>& instances);

/// Comma-separated pipeline CSV header.
extern const char* const kPipelineCsvHeader;
extern const char* const kDetectionCsvHeader;

std::string pipeline_csv(const std::vector<PipelineRow>& rows, bool record_timing = true);
nlohmann::json pipeline_json(const std::vector<PipelineRow>& rows);
std::vector<PipelineRow> pipeline_rows_from_json(const nlohmann::json& j);
std::string detection_csv(const DetectionTable& table);
nlohmann::json detection_json(const DetectionTable& table);

struct ColumnStats {
  std::string column;
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  /// stddev above 5% of |mean|.
  bool dispersed = false;
};

/// Mean and sample standard deviation of the numeric columns over "ok" rows.
std::vector<ColumnStats> aggregate(const std::vector<PipelineRow>& rows, bool record_timing = true);
std::string aggregate_csv(const std::vector<ColumnStats>& stats);

/// Writes `text` to `path` (or stdout when empty).
void emit(const std::string& text, const std::optional<std::filesystem::path>& path);

}  // namespace rpcone
