// rpcone: generate instances, solve them, and run original-vs-projected
// experiments.
//
// Exit status: 0 on success, 1 on a configuration or input error, 2 when any
// solve in the run ended with status "numerical".

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rpcone/bounds.hpp"
#include "rpcone/errors.hpp"
#include "rpcone/harness.hpp"
#include "rpcone/instances.hpp"
#include "rpcone/io.hpp"
#include "rpcone/pipeline.hpp"
#include "rpcone/solver.hpp"

namespace {

using namespace rpcone;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Flags {
  std::optional<double> epsilon;
  std::optional<double> c0;
  std::optional<int> d;
  std::optional<double> density;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> solver;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<double> u;
  std::optional<double> c2;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<std::string> config;
  std::vector<double> epsilons;
  std::vector<std::string> instances;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--epsilon", f.epsilon, "Projection distortion in (0, 1)");
  cmd->add_option("--c0", f.c0, "Constant in d = c0 ln(m) / eps^2");
  cmd->add_option("--d", f.d, "Explicit projected dimension");
  cmd->add_option("--density", f.density, "Nonzero fraction of the sketch (or of A_i for generate)");
  cmd->add_option("--trials", f.trials, "Instances per generator template");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--solver", f.solver, "Registered solver name");
  cmd->add_option("--tol", f.tol, "Solver relative tolerance");
  cmd->add_option("--max-iter", f.max_iter, "Solver iteration budget");
  cmd->add_option("--u", f.u, "Deviation parameter u of the width bounds");
  cmd->add_option("--c2", f.c2, "Constant C2 of the width bounds");
  cmd->add_option("--output", f.output, "Output file (stdout when omitted)");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig build_config(const Flags& f) {
  ExperimentConfig c;
  if (f.config) c = config_from_json(read_json(*f.config));
  if (f.epsilon) c.epsilon = *f.epsilon;
  if (f.c0) c.c0 = *f.c0;
  if (f.d) c.d_override = *f.d;
  if (f.density) c.sketch_density = *f.density;
  if (f.trials) c.trials = *f.trials;
  if (f.seed) c.seed = *f.seed;
  if (f.solver) c.solver.solver = *f.solver;
  if (f.tol) c.solver.tol = *f.tol;
  if (f.max_iter) c.solver.max_iter = *f.max_iter;
  if (f.u) c.u = *f.u;
  if (f.c2) c.c2 = *f.c2;
  if (f.output) c.output = *f.output;
  if (f.format) c.format = output_format_from_string(*f.format);
  if (!f.epsilons.empty()) c.epsilons = f.epsilons;
  for (const auto& p : f.instances) c.instance_files.emplace_back(p);
  if (f.no_timing) c.record_timing = false;
  solver_registry(c.solver.solver);
  c.validate();
  return c;
}

SolverOptions solver_options(const Flags& f) {
  SolverOptions o;
  if (f.solver) o.solver = *f.solver;
  if (f.tol) o.tol = *f.tol;
  if (f.max_iter) o.max_iter = *f.max_iter;
  if (f.seed) o.seed = *f.seed;
  if (!(o.tol > 0.0)) throw ParameterError("tol must be positive");
  if (o.max_iter < 1) throw ParameterError("max-iter must be positive");
  solver_registry(o.solver);
  return o;
}

ConicProgram load_program(const std::string& path, bool sdpa, double theta) {
  return sdpa ? read_sdpa(std::filesystem::path(path), theta) : read_program(path);
}

std::string dump(const nlohmann::json& j) { return j.dump(1) + "\n"; }

nlohmann::json result_json(const SolveResult& r) {
  const Eigen::VectorXd& x = r.primal.coords();
  nlohmann::json j = {{"status", to_string(r.status)},
                      {"objective", std::isfinite(r.objective) ? nlohmann::json(r.objective)
                                                               : nlohmann::json(r.objective > 0 ? "inf" : "-inf")},
                      {"residuals",
                       {{"primal_eq", r.residuals.primal_eq},
                        {"dual_cone", r.residuals.dual_cone},
                        {"gap", r.residuals.gap}}},
                      {"iterations", r.iterations},
                      {"wall_time", r.wall_time},
                      {"x", std::vector<double>(x.data(), x.data() + x.size())},
                      {"y", std::vector<double>(r.dual_y.data(), r.dual_y.data() + r.dual_y.size())},
                      {"nu", r.dual_nu}};
  if (r.certificate) j["certificate"] = certificate_to_json(*r.certificate);
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"Random projections for symmetric conic programs"};
  app.require_subcommand(1);
  Flags f;

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random instance");
  add_common(gen, f);
  std::string cone_text = "psd:10";
  int gen_m = 100;
  std::string cost = "identity";
  bool infeasible = false;
  double theta_factor = 2.0;
  double margin = 0.1;
  gen->add_option("--cone", cone_text, "Cone, e.g. psd:15 or orthant:4,lorentz:3");
  gen->add_option("--m", gen_m, "Number of equality constraints");
  gen->add_option("--cost", cost, "identity or random")->check(CLI::IsMember({"identity", "random"}));
  gen->add_flag("--infeasible", infeasible, "Plant a Farkas certificate");
  gen->add_option("--theta-factor", theta_factor, "theta = factor * <e, x0>");
  gen->add_option("--margin", margin, "Spectral margin of the planted certificate");

  // solve / project / bounds operate on one instance
  std::string instance;
  bool sdpa = false;
  double sdpa_theta = 1e3;
  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("instance", instance, "Instance file")->required();
    cmd->add_flag("--sdpa", sdpa, "Read the instance as SDPA sparse format");
    cmd->add_option("--theta", sdpa_theta, "Trace bound for SDPA input");
  };
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  add_common(solve_cmd, f);
  add_instance(solve_cmd);
  auto* project_cmd = app.add_subcommand("project", "Write the projected program of one instance");
  add_common(project_cmd, f);
  add_instance(project_cmd);
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate the bound parameters of one instance");
  add_common(bounds_cmd, f);
  add_instance(bounds_cmd);

  // batch commands
  auto* pipe_cmd = app.add_subcommand("pipeline", "Original vs projected solves over a batch");
  auto* infeas_cmd = app.add_subcommand("infeas-trial", "Infeasibility detection over a batch");
  for (auto* cmd : {pipe_cmd, infeas_cmd}) {
    add_common(cmd, f);
    cmd->add_option("--config", f.config, "JSON experiment configuration");
    cmd->add_option("--instances", f.instances, "Extra native instance files");
    cmd->add_flag("--no-timing", f.no_timing, "Leave wall-clock columns empty");
  }
  infeas_cmd->add_option("--epsilons", f.epsilons, "Epsilon values to sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::optional<std::filesystem::path> out =
      f.output ? std::optional<std::filesystem::path>(*f.output) : std::nullopt;

  if (gen->parsed()) {
    GenSpec g;
    g.cone = parse_cone(cone_text);
    g.m = gen_m;
    if (f.density) g.density = *f.density;
    g.cost_kind = cost_kind_from_string(cost);
    g.feasibility = infeasible ? Feasibility::kInfeasible : Feasibility::kFeasible;
    if (f.seed) g.seed = *f.seed;
    g.theta_factor = theta_factor;
    g.margin = margin;
    nlohmann::json j;
    if (infeasible) {
      const InfeasibleInstance inst = generate_infeasible(g);
      j = program_to_json(inst.program);
      j["certificate"] = certificate_to_json(inst.certificate);
    } else {
      const FeasibleInstance inst = generate_feasible(g);
      j = program_to_json(inst.program);
      const Eigen::VectorXd& w = inst.witness.coords();
      j["witness"] = std::vector<double>(w.data(), w.data() + w.size());
    }
    j["generator"] = gen_spec_to_json(g);
    emit(dump(j), out);
    return kExitOk;
  }

  if (solve_cmd->parsed()) {
    const SolverOptions opts = solver_options(f);
    const SolveResult r = solve(load_program(instance, sdpa, sdpa_theta), opts);
    emit(dump(result_json(r)), out);
    return r.status == SolveStatus::kNumerical ? kExitNumerical : kExitOk;
  }

  if (project_cmd->parsed()) {
    const ConicProgram p = load_program(instance, sdpa, sdpa_theta);
    SketchParams sp;
    if (f.epsilon) sp.epsilon = *f.epsilon;
    if (f.c0) sp.c0 = *f.c0;
    if (f.density) sp.density = *f.density;
    if (f.seed) sp.seed = *f.seed;
    sp.d_override = f.d;
    const ProjectedProgram pt =
        project_program(p, make_sketch(p.num_constraints(), sp), std::filesystem::path(instance).stem().string());
    emit(dump(projected_to_json(pt)), out);
    return kExitOk;
  }

  if (bounds_cmd->parsed()) {
    const ConicProgram p = load_program(instance, sdpa, sdpa_theta);
    ErrorReport r;
    auto& q = r.parameters;
    q.epsilon = f.epsilon.value_or(0.2);
    q.c0 = f.c0.value_or(kDefaultC0);
    q.m = p.num_constraints();
    q.n = p.dim();
    q.d = f.d ? *f.d : embed_dimension(q.m, q.epsilon, q.c0);
    q.theta = p.trace_bound();
    q.u = f.u.value_or(kDefaultU);
    q.c2 = f.c2.value_or(kDefaultC2);
    const WidthEstimate w = estimate_gaussian_width(q.n, cone_unit_ball_sup(p.spec()), 1000, f.seed.value_or(0));
    q.w_b = w.estimate;
    q.w_b_std_error = w.std_error;
    q.delta = cone_unit_diameter(p.spec());
    const LinearOperator op = build_operator(p);
    q.kappa = op.condition_number();
    q.op_norm2 = op.sigma_max();
    q.opnorm_bound = opnorm_bound(p);
    q.norm_b = p.rhs().norm();
    q.norm_c = p.spec().metric_weights().cwiseProduct(p.cost().coords()).norm();
    q.norm_q_half = p.spec().metric_sqrt_norm();
    const SolveResult sol = solve(p, solver_options(f));
    if (sol.status == SolveStatus::kOptimal) q.norm_y_star = sol.dual_y.norm();
    if (sol.certificate) q.norm_y_hat = sol.certificate->y_hat.norm();
    fill_theoretical(r);
    nlohmann::json j = report_to_json(r);
    j["status_P"] = to_string(sol.status);
    emit(dump(j), out);
    return sol.status == SolveStatus::kNumerical ? kExitNumerical : kExitOk;
  }

  const ExperimentConfig config = build_config(f);
  if (config.gen.empty() && config.instance_files.empty())
    throw ParameterError("no instances: give --config with a \"gen\" list or --instances");

  if (pipe_cmd->parsed()) {
    const std::vector<PipelineRow> rows = run_pipeline(config);
    if (config.format == OutputFormat::kCsv)
      emit(pipeline_csv(rows, config.record_timing), config.output);
    else
      emit(dump(pipeline_json(rows)), config.output);
    std::cerr << aggregate_csv(aggregate(rows, config.record_timing));
    bool numerical = false;
    for (const auto& r : rows) {
      numerical = numerical || r.numerical;
      if (r.outcome == "error") std::cerr << r.instance << ": " << r.message << "\n";
    }
    return numerical ? kExitNumerical : kExitOk;
  }

  const DetectionTable table = run_infeasibility_trial(config);
  if (config.format == OutputFormat::kCsv)
    emit(detection_csv(table), config.output);
  else
    emit(dump(detection_json(table)), config.output);
  bool numerical = false;
  for (const auto& s : table.summary) {
    std::cerr << "epsilon " << s.epsilon << ": detected " << s.detected << "/" << s.instances
              << ", numerical " << s.numerical << ", condition holds " << s.condition_holds << "\n";
    numerical = numerical || s.numerical > 0;
  }
  return numerical ? kExitNumerical : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const LookupError& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitConfig;
}
