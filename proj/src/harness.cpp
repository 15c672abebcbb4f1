#include "rpcone/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rpcone/errors.hpp"
#include "rpcone/io.hpp"
#include "rpcone/pipeline.hpp"
#include "rpcone/rng.hpp"

namespace rpcone {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kNaN = ErrorReport::kNaN;

constexpr std::uint64_t kSketchStream = 101;
constexpr std::uint64_t kWidthStream = 102;
constexpr std::uint64_t kFileStream = 1u << 20;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_time(double v, bool record) {
  if (!record || std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::json num(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

double num_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return kNaN;
  return j.at(key).get<double>();
}

double structural_density(const ConicProgram& p) {
  if (p.num_constraints() == 0 || p.dim() == 0) return kNaN;
  const auto& a = p.constraint_coords();
  return static_cast<double>((a.array() != 0.0).count()) / static_cast<double>(a.size());
}

ConicProgram load_item(const BatchItem& item, std::optional<Certificate>* cert) {
  if (item.file) {
    const nlohmann::json j = read_json(*item.file);
    if (cert && j.contains("certificate")) *cert = certificate_from_json(j.at("certificate"));
    return program_from_json(j);
  }
  GenSpec g = *item.gen;
  g.seed = item.seed;
  if (g.feasibility == Feasibility::kFeasible) return generate_feasible(g).program;
  InfeasibleInstance inst = generate_infeasible(g);
  if (cert) *cert = inst.certificate;
  return inst.program;
}

}  // namespace

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw ParameterError("unknown output format '" + name + "'");
}

void ExperimentConfig::validate() const {
  auto check_eps = [](double e) {
    if (!(e > 0.0 && e < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  };
  check_eps(epsilon);
  for (double e : epsilons) check_eps(e);
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (!(c0 > 0.0)) throw ParameterError("c0 must be positive");
  if (d_override && *d_override < 1) throw ParameterError("d must be positive");
  if (!(sketch_density > 0.0 && sketch_density <= 1.0)) throw ParameterError("density must lie in (0, 1]");
  if (u < 0.0) throw ParameterError("u must be nonnegative");
  if (!(solver.tol > 0.0)) throw ParameterError("tol must be positive");
  if (solver.max_iter < 1) throw ParameterError("max-iter must be positive");
  if (width_draws < 100) throw ParameterError("width_draws must be at least 100");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("gen"))
      for (const auto& g : j.at("gen")) c.gen.push_back(gen_spec_from_json(g));
    if (j.contains("instances"))
      for (const auto& f : j.at("instances")) c.instance_files.emplace_back(f.get<std::string>());
    c.epsilon = j.value("epsilon", c.epsilon);
    if (j.contains("epsilons")) c.epsilons = j.at("epsilons").get<std::vector<double>>();
    c.c0 = j.value("c0", c.c0);
    if (j.contains("d") && !j.at("d").is_null()) c.d_override = j.at("d").get<int>();
    c.sketch_density = j.value("density", c.sketch_density);
    if (j.contains("family")) c.family = sketch_family_from_string(j.at("family").get<std::string>());
    c.trials = j.value("trials", c.trials);
    c.solver.solver = j.value("solver", c.solver.solver);
    c.solver.tol = j.value("tol", c.solver.tol);
    c.solver.max_iter = j.value("max_iter", c.solver.max_iter);
    c.u = j.value("u", c.u);
    c.c2 = j.value("C2", c.c2);
    c.c_tilde = j.value("C_tilde", c.c_tilde);
    c.width_draws = j.value("width_draws", c.width_draws);
    if (j.contains("format")) c.format = output_format_from_string(j.at("format").get<std::string>());
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    c.seed = j.value("seed", c.seed);
    c.record_timing = j.value("record_timing", c.record_timing);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed config: ") + e.what());
  }
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["gen"] = nlohmann::json::array();
  for (const auto& g : c.gen) j["gen"].push_back(gen_spec_to_json(g));
  j["instances"] = nlohmann::json::array();
  for (const auto& f : c.instance_files) j["instances"].push_back(f.string());
  j["epsilon"] = c.epsilon;
  j["epsilons"] = c.epsilons;
  j["c0"] = c.c0;
  j["d"] = c.d_override ? nlohmann::json(*c.d_override) : nlohmann::json(nullptr);
  j["density"] = c.sketch_density;
  j["family"] = to_string(c.family);
  j["trials"] = c.trials;
  j["solver"] = c.solver.solver;
  j["tol"] = c.solver.tol;
  j["max_iter"] = c.solver.max_iter;
  j["u"] = c.u;
  j["C2"] = c.c2;
  j["C_tilde"] = c.c_tilde;
  j["width_draws"] = c.width_draws;
  j["format"] = c.format == OutputFormat::kCsv ? "csv" : "json";
  if (c.output) j["output"] = c.output->string();
  j["seed"] = c.seed;
  j["record_timing"] = c.record_timing;
  return j;
}

std::vector<BatchItem> expand_batch(const ExperimentConfig& config) {
  std::vector<BatchItem> items;
  for (std::size_t gi = 0; gi < config.gen.size(); ++gi) {
    const std::uint64_t base = derive_seed(config.seed, gi);
    for (int k = 0; k < config.trials; ++k) {
      BatchItem it;
      it.id = "g" + std::to_string(gi) + "-" + std::to_string(k);
      it.seed = derive_seed(base, static_cast<std::uint64_t>(k));
      it.gen = config.gen[gi];
      items.push_back(std::move(it));
    }
  }
  for (std::size_t fi = 0; fi < config.instance_files.size(); ++fi) {
    BatchItem it;
    it.id = config.instance_files[fi].stem().string();
    it.seed = derive_seed(config.seed, kFileStream + fi);
    it.file = config.instance_files[fi];
    items.push_back(std::move(it));
  }
  return items;
}

double relative_error(double a, double b) {
  const double denom = std::max(std::abs(a), std::abs(b));
  return denom == 0.0 ? 0.0 : (a - b) / denom;
}

PipelineRow run_pipeline_instance(const ConicProgram& p, const std::string& id, std::uint64_t seed,
                                  const ExperimentConfig& config) {
  PipelineRow row;
  row.instance = id;
  row.seed = seed;
  row.density = structural_density(p);
  auto& meas = row.report.measured;
  auto& par = row.report.parameters;
  par.epsilon = config.epsilon;
  par.m = p.num_constraints();
  par.n = p.dim();
  par.theta = p.trace_bound();
  par.u = config.u;
  par.c2 = config.c2;
  par.c_tilde = config.c_tilde;
  par.c0 = config.c0;

  const auto t_p = Clock::now();
  const SolveResult res_p = solve(p, config.solver);
  row.cpu = seconds_since(t_p);
  row.status_p = to_string(res_p.status);
  row.iterations_p = res_p.iterations;
  meas.value_p = res_p.objective;
  if (res_p.status == SolveStatus::kNumerical) row.numerical = true;
  if (res_p.status != SolveStatus::kOptimal) {
    row.outcome = row.status_p;
    return row;
  }

  // cpu_T: sample T, project, solve (P_T), retrieve.
  const auto t_t = Clock::now();
  SketchParams sp;
  sp.epsilon = config.epsilon;
  sp.c0 = config.c0;
  sp.density = config.sketch_density;
  sp.family = config.family;
  sp.seed = derive_seed(seed, kSketchStream);
  sp.d_override = config.d_override;
  const ProjectionSketch sketch = make_sketch(p.num_constraints(), sp);
  const ProjectedProgram pt = project_program(p, sketch, id);
  const SolveResult res_pt = solve(pt.program, config.solver);
  std::optional<LinearOperator> op;
  std::optional<RetrievedSolution> retr;
  if (res_pt.status == SolveStatus::kOptimal) {
    op.emplace(build_operator(p));
    retr = retrieve_solution(res_pt.primal, *op, p.rhs(), p.cost());
  }
  row.cpu_t = seconds_since(t_t);

  par.d = sketch.rows();
  row.status_pt = to_string(res_pt.status);
  row.iterations_pt = res_pt.iterations;
  meas.value_pt = res_pt.objective;
  if (res_pt.status == SolveStatus::kNumerical) row.numerical = true;
  if (!retr) {
    row.outcome = row.status_pt;
    return row;
  }

  const LiftedDual lifted = lift_dual(sketch.matrix, res_pt.dual_y, res_pt.dual_nu);
  row.lifted_y = lifted.y;
  row.lifted_nu = lifted.nu;
  row.lifted_slack_lambda_min = lambda_min(dual_slack(p, lifted.y, lifted.nu));

  row.value_retrieved = p.objective(retr->x_tilde);
  row.rel_err_pt = relative_error(meas.value_p, meas.value_pt);
  row.rel_err_retrieved = relative_error(meas.value_p, row.value_retrieved);
  row.residual_retrieved = retr->residual_after;
  row.rank_deficient = retr->rank_deficient;
  meas.feasibility_residual = retr->residual_before;
  meas.lambda_min_retrieved = retr->lambda_min_after;
  meas.objective_shift = retr->objective_shift;

  const WidthEstimate w = estimate_gaussian_width(p.dim(), cone_unit_ball_sup(p.spec()), config.width_draws,
                                                  derive_seed(seed, kWidthStream));
  par.w_b = w.estimate;
  par.w_b_std_error = w.std_error;
  par.delta = cone_unit_diameter(p.spec());
  par.kappa = op->condition_number();
  par.op_norm2 = op->sigma_max();
  par.opnorm_bound = opnorm_bound(p);
  par.norm_b = p.rhs().norm();
  par.norm_c = p.spec().metric_weights().cwiseProduct(p.cost().coords()).norm();
  par.norm_y_star = res_p.dual_y.norm();
  par.norm_q_half = p.spec().metric_sqrt_norm();
  par.lambda1_xt = lambda_min(res_pt.primal);
  fill_theoretical(row.report);
  return row;
}

std::vector<PipelineRow> run_pipeline(const ExperimentConfig& config) {
  config.validate();
  const std::vector<BatchItem> items = expand_batch(config);
  std::vector<PipelineRow> rows(items.size());
  const int count = static_cast<int>(items.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < count; ++k) {
    const BatchItem& item = items[k];
    try {
      rows[k] = run_pipeline_instance(load_item(item, nullptr), item.id, item.seed, config);
    } catch (const std::exception& e) {
      rows[k].instance = item.id;
      rows[k].seed = item.seed;
      rows[k].outcome = "error";
      rows[k].message = e.what();
    }
  }
  return rows;
}

double largest_condition_epsilon(const std::vector<InfeasibleInstance>& instances) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& inst : instances) {
    const double scale = inst.certificate.y_hat.norm() * (inst.program.rhs().norm() + opnorm_bound(inst.program));
    if (scale > 0.0) best = std::min(best, 1.0 / scale);
  }
  return std::isfinite(best) ? best * (1.0 - 1e-9) : best;
}

DetectionTable run_infeasibility_trial(const ExperimentConfig& config) {
  config.validate();
  const std::vector<BatchItem> items = expand_batch(config);
  std::vector<double> eps = config.epsilons;
  if (eps.empty()) eps.push_back(config.epsilon);

  struct Loaded {
    std::optional<ConicProgram> program;
    std::optional<Certificate> cert;
    double opnorm = 0.0;
    std::string error;
  };
  std::vector<Loaded> loaded(items.size());
  const int n_items = static_cast<int>(items.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < n_items; ++k) {
    try {
      std::optional<Certificate> cert;
      ConicProgram p = load_item(items[k], &cert);
      if (!cert) {
        const SolveResult r = solve(p, config.solver);
        if (r.status == SolveStatus::kPrimalInfeasible) cert = r.certificate;
      }
      loaded[k].opnorm = opnorm_bound(p);
      loaded[k].program = std::move(p);
      loaded[k].cert = std::move(cert);
    } catch (const std::exception& e) {
      loaded[k].error = e.what();
    }
  }

  DetectionTable table;
  table.rows.resize(items.size() * eps.size());
  const int tasks = static_cast<int>(table.rows.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < tasks; ++t) {
    const std::size_t k = static_cast<std::size_t>(t) / eps.size();
    const std::size_t e = static_cast<std::size_t>(t) % eps.size();
    DetectionRow& row = table.rows[t];
    row.instance = items[k].id;
    row.seed = items[k].seed;
    row.epsilon = eps[e];
    const Loaded& l = loaded[k];
    if (!l.program) {
      row.status = "error";
      row.message = l.error;
      continue;
    }
    try {
      const ConicProgram& p = *l.program;
      if (l.cert) {
        const InfeasibilityCondition cond = eval_infeasibility_condition(eps[e], l.cert->y_hat, p.rhs(), l.opnorm);
        row.condition_lhs = cond.lhs;
        row.condition_holds = cond.holds;
      }
      SketchParams sp;
      sp.epsilon = eps[e];
      sp.c0 = config.c0;
      sp.density = config.sketch_density;
      sp.family = config.family;
      sp.seed = derive_seed(items[k].seed, kSketchStream);
      sp.d_override = config.d_override;
      const ProjectionSketch sketch = make_sketch(p.num_constraints(), sp);
      row.d = sketch.rows();
      const SolveResult r = solve(project_program(p, sketch, row.instance).program, config.solver);
      row.status = to_string(r.status);
      row.detected = r.status == SolveStatus::kPrimalInfeasible;
      row.numerical = r.status == SolveStatus::kNumerical;
    } catch (const std::exception& ex) {
      row.status = "error";
      row.message = ex.what();
    }
  }

  for (double e : eps) {
    DetectionSummary s;
    s.epsilon = e;
    for (const auto& row : table.rows) {
      if (row.epsilon != e || row.status == "error") continue;
      ++s.instances;
      s.detected += row.detected;
      s.numerical += row.numerical;
      s.condition_holds += row.condition_holds;
    }
    table.summary.push_back(s);
  }
  return table;
}

const char* const kPipelineCsvHeader =
    "instance,seed,outcome,status_P,status_PT,m,n,d,dens,v_P,v_PT,err_PT,v_retr,err_retr,cpu,cpu_T,"
    "iter_P,iter_PT,feas_residual,retr_residual,lambda_min_retr,obj_shift,lifted_slack_lambda_min,"
    "opt_gap_bound,feas_err_bound,retr_cone_bound,retr_obj_bound,feas_err_bound_sqrt_d,"
    "retr_cone_bound_sqrt_d,retr_obj_bound_sqrt_d,epsilon,theta,u,C2,c0,w_B,Delta,kappa,op_norm2,"
    "opnorm_bound,norm_b,norm_c,norm_y_star,norm_Q_half";

const char* const kDetectionCsvHeader =
    "instance,seed,epsilon,d,status,detected,numerical,condition_lhs,condition_holds";

std::string pipeline_csv(const std::vector<PipelineRow>& rows, bool record_timing) {
  std::ostringstream os;
  os << kPipelineCsvHeader << '\n';
  for (const auto& r : rows) {
    const auto& m = r.report.measured;
    const auto& t = r.report.theoretical;
    const auto& q = r.report.parameters;
    const std::vector<std::string> fields = {
        csv_field(r.instance), std::to_string(r.seed), csv_field(r.outcome), r.status_p, r.status_pt,
        std::to_string(q.m), std::to_string(q.n), std::to_string(q.d), fmt(r.density), fmt(m.value_p),
        fmt(m.value_pt), fmt(r.rel_err_pt), fmt(r.value_retrieved), fmt(r.rel_err_retrieved),
        fmt_time(r.cpu, record_timing), fmt_time(r.cpu_t, record_timing), std::to_string(r.iterations_p),
        std::to_string(r.iterations_pt), fmt(m.feasibility_residual), fmt(r.residual_retrieved),
        fmt(m.lambda_min_retrieved), fmt(m.objective_shift), fmt(r.lifted_slack_lambda_min),
        fmt(t.optimality_gap_bound), fmt(t.feasibility_error_bound), fmt(t.retrieval_cone_bound),
        fmt(t.retrieval_objective_bound), fmt(t.feasibility_error_bound_sqrt_d),
        fmt(t.retrieval_cone_bound_sqrt_d), fmt(t.retrieval_objective_bound_sqrt_d), fmt(q.epsilon),
        fmt(q.theta), fmt(q.u), fmt(q.c2), fmt(q.c0), fmt(q.w_b), fmt(q.delta), fmt(q.kappa),
        fmt(q.op_norm2), fmt(q.opnorm_bound), fmt(q.norm_b), fmt(q.norm_c), fmt(q.norm_y_star),
        fmt(q.norm_q_half)};
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << fields[i];
    os << '\n';
  }
  return os.str();
}

nlohmann::json pipeline_json(const std::vector<PipelineRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"instance", r.instance},
                   {"seed", r.seed},
                   {"outcome", r.outcome},
                   {"message", r.message},
                   {"status_P", r.status_p},
                   {"status_PT", r.status_pt},
                   {"density", num(r.density)},
                   {"v_retr", num(r.value_retrieved)},
                   {"err_PT", num(r.rel_err_pt)},
                   {"err_retr", num(r.rel_err_retrieved)},
                   {"retr_residual", num(r.residual_retrieved)},
                   {"rank_deficient", r.rank_deficient},
                   {"iter_P", r.iterations_p},
                   {"iter_PT", r.iterations_pt},
                   {"cpu", num(r.cpu)},
                   {"cpu_T", num(r.cpu_t)},
                   {"numerical", r.numerical},
                   {"lifted_slack_lambda_min", num(r.lifted_slack_lambda_min)},
                   {"report", report_to_json(r.report)}});
  }
  return out;
}

std::vector<PipelineRow> pipeline_rows_from_json(const nlohmann::json& j) {
  std::vector<PipelineRow> rows;
  try {
    for (const auto& o : j) {
      PipelineRow r;
      r.instance = o.at("instance").get<std::string>();
      r.seed = o.at("seed").get<std::uint64_t>();
      r.outcome = o.at("outcome").get<std::string>();
      r.message = o.value("message", "");
      r.status_p = o.value("status_P", "");
      r.status_pt = o.value("status_PT", "");
      r.density = num_from(o, "density");
      r.value_retrieved = num_from(o, "v_retr");
      r.rel_err_pt = num_from(o, "err_PT");
      r.rel_err_retrieved = num_from(o, "err_retr");
      r.residual_retrieved = num_from(o, "retr_residual");
      r.rank_deficient = o.value("rank_deficient", false);
      r.iterations_p = o.value("iter_P", 0);
      r.iterations_pt = o.value("iter_PT", 0);
      r.cpu = num_from(o, "cpu");
      r.cpu_t = num_from(o, "cpu_T");
      r.numerical = o.value("numerical", false);
      r.lifted_slack_lambda_min = num_from(o, "lifted_slack_lambda_min");
      r.report = report_from_json(o.at("report"));
      rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed pipeline table: ") + e.what());
  }
  return rows;
}

std::string detection_csv(const DetectionTable& table) {
  std::ostringstream os;
  os << kDetectionCsvHeader << '\n';
  for (const auto& r : table.rows) {
    os << csv_field(r.instance) << ',' << r.seed << ',' << fmt(r.epsilon) << ',' << r.d << ','
       << r.status << ',' << (r.detected ? 1 : 0) << ',' << (r.numerical ? 1 : 0) << ','
       << fmt(r.condition_lhs) << ',' << (r.condition_holds ? 1 : 0) << '\n';
  }
  return os.str();
}

nlohmann::json detection_json(const DetectionTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"instance", r.instance},
                    {"seed", r.seed},
                    {"epsilon", r.epsilon},
                    {"d", r.d},
                    {"status", r.status},
                    {"detected", r.detected},
                    {"numerical", r.numerical},
                    {"condition_lhs", num(r.condition_lhs)},
                    {"condition_holds", r.condition_holds},
                    {"message", r.message}});
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& s : table.summary)
    summary.push_back({{"epsilon", s.epsilon},
                       {"instances", s.instances},
                       {"detected", s.detected},
                       {"rate", s.rate()},
                       {"numerical", s.numerical},
                       {"condition_holds", s.condition_holds}});
  return {{"rows", rows}, {"summary", summary}};
}

std::vector<ColumnStats> aggregate(const std::vector<PipelineRow>& rows, bool record_timing) {
  struct Column {
    const char* name;
    double (*get)(const PipelineRow&);
    bool timing;
  };
  static const Column columns[] = {
      {"v_P", [](const PipelineRow& r) { return r.report.measured.value_p; }, false},
      {"v_PT", [](const PipelineRow& r) { return r.report.measured.value_pt; }, false},
      {"err_PT", [](const PipelineRow& r) { return r.rel_err_pt; }, false},
      {"v_retr", [](const PipelineRow& r) { return r.value_retrieved; }, false},
      {"err_retr", [](const PipelineRow& r) { return r.rel_err_retrieved; }, false},
      {"cpu", [](const PipelineRow& r) { return r.cpu; }, true},
      {"cpu_T", [](const PipelineRow& r) { return r.cpu_t; }, true},
      {"iter_P", [](const PipelineRow& r) { return static_cast<double>(r.iterations_p); }, false},
      {"iter_PT", [](const PipelineRow& r) { return static_cast<double>(r.iterations_pt); }, false},
      {"feas_residual", [](const PipelineRow& r) { return r.report.measured.feasibility_residual; }, false},
      {"lambda_min_retr", [](const PipelineRow& r) { return r.report.measured.lambda_min_retrieved; }, false},
      {"obj_shift", [](const PipelineRow& r) { return r.report.measured.objective_shift; }, false},
  };
  std::vector<ColumnStats> out;
  for (const auto& col : columns) {
    if (col.timing && !record_timing) continue;
    ColumnStats s;
    s.column = col.name;
    std::vector<double> values;
    for (const auto& r : rows)
      if (r.outcome == "ok" && !std::isnan(col.get(r))) values.push_back(col.get(r));
    s.count = static_cast<int>(values.size());
    if (s.count == 0) continue;
    for (double v : values) s.mean += v;
    s.mean /= s.count;
    if (s.count > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean) * (v - s.mean);
      s.stddev = std::sqrt(ss / (s.count - 1));
    }
    s.dispersed = s.stddev > 0.05 * std::abs(s.mean);
    out.push_back(s);
  }
  return out;
}

std::string aggregate_csv(const std::vector<ColumnStats>& stats) {
  std::ostringstream os;
  os << "column,count,mean,std,std_above_5pct\n";
  for (const auto& s : stats)
    os << s.column << ',' << s.count << ',' << fmt(s.mean) << ',' << fmt(s.stddev) << ','
       << (s.dispersed ? 1 : 0) << '\n';
  return os.str();
}

void emit(const std::string& text, const std::optional<std::filesystem::path>& path) {
  if (!path || path->empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path->string());
  out << text;
}

}  // namespace rpcone
