#include "commands.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <future>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "npg/diagnostics.hpp"
#include "trace_io.hpp"

namespace npg::cli {

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::converged: return kExitConverged;
    case RunStatus::max_iter: return kExitMaxIter;
    case RunStatus::merit_stall: return kExitMeritStall;
  }
  return kExitError;
}

double resolve_q_star(QStarSource source, const RunConfig& config,
                      const CompositeProblem& problem, const RunResult& run) {
  switch (source) {
    case QStarSource::known:
      if (!problem.known_optimum) {
        throw ContractViolation("q_star: problem '" +
                                problems::to_string(config.problem.kind) +
                                "' has no known optimum");
      }
      return *problem.known_optimum;
    case QStarSource::oracle:
      if (config.problem.kind != problems::ProblemKind::l0quad) {
        throw ContractViolation("q_star: the oracle source needs an l0quad problem");
      }
      return problems::l0_support_value(problems::l0_center(config.problem),
                                        config.problem.lam, run.x_final);
    case QStarSource::long_run: {
      SolverConfig reference = config.solver;
      reference.variant = Variant::monotone;
      reference.tol = 1e-14;
      reference.max_iter = 1'000'000;
      const RunResult ref = solve(problem, reference);
      return std::min(ref.final_q, ref.final_merit);
    }
  }
  throw ContractViolation("q_star: unknown source");
}

namespace {

void write_outputs(const RunConfig& config, const RunResult& result,
                   const nlohmann::json& summary, std::ostream& out) {
  if (!config.csv_path.empty()) write_file(config.csv_path, trace_csv(result.trace));
  if (!config.json_path.empty()) {
    write_file(config.json_path, summary.dump(2) + "\n");
  } else {
    out << summary.dump(2) << '\n';
  }
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const auto problem = problems::make_problem(config.problem);
  const RunResult result = solve(problem, config.solver);
  const double stationarity = diagnostics::stationarity_check(problem, result.x_final);
  write_outputs(config, result, summary_json(result, config, stationarity), out);
  return exit_code(result.status);
}

int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.solver.validate();
  const auto problem = problems::make_problem(config.problem);
  constexpr std::array variants = {Variant::monotone, Variant::average, Variant::max};

  // Runs are independent; the solver holds no shared state.
  std::array<std::future<RunResult>, variants.size()> pending;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    SolverConfig c = config.solver;
    c.variant = variants[i];
    pending[i] = std::async(std::launch::async,
                            [&problem, c] { return solve(problem, c); });
  }
  std::array<RunResult, variants.size()> results;
  for (std::size_t i = 0; i < variants.size(); ++i) results[i] = pending[i].get();

  std::ostringstream table;
  table << "variant,status,iterations,total_backtracks,final_q,final_residual\n";
  nlohmann::json runs = nlohmann::json::array();
  int code = kExitConverged;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const auto& r = results[i];
    long long backtracks = 0;
    for (const auto& rec : r.trace) backtracks += rec.backtracks;
    table << to_string(variants[i]) << ',' << to_string(r.status) << ','
          << r.iterations() << ',' << backtracks << ',' << format_double(r.final_q)
          << ',' << format_double(r.final_residual()) << '\n';
    RunConfig echoed = config;
    echoed.solver.variant = variants[i];
    runs.push_back(summary_json(
        r, echoed, diagnostics::stationarity_check(problem, r.x_final)));
    if (code == kExitConverged) code = exit_code(r.status);
  }

  if (!config.csv_path.empty()) {
    write_file(config.csv_path, table.str());
  } else {
    out << table.str();
  }
  if (!config.json_path.empty()) write_file(config.json_path, runs.dump(2) + "\n");

  if (config.solver.p_min == 1.0 && config.solver.m == 0) {
    const bool same = diagnostics::same_iterates(results[0], results[1]) &&
                      diagnostics::same_iterates(results[0], results[2]);
    out << "# degeneracy equivalence (monotone, average p=1, max m=0): "
        << (same ? "passed" : "FAILED") << '\n';
    if (!same) {
      err << "error: degenerate variants produced different iterates\n";
      return kExitError;
    }
  }
  return code;
}

int cmd_rates(const RunConfig& config, QStarSource source, std::ostream& out,
              std::ostream& err) {
  const auto problem = problems::make_problem(config.problem);
  const RunResult result = solve(problem, config.solver);
  if (result.trace.size() < diagnostics::kMinRateTraceLength) {
    err << "error: trace too short (" << result.trace.size()
        << " iterations, need at least " << diagnostics::kMinRateTraceLength
        << ")\n";
    return kExitError;
  }
  const double q_star = resolve_q_star(source, config, problem, result);
  const auto report = diagnostics::estimate_rate(result.trace, q_star);

  auto doc = rate_report_json(report);
  doc["q_star_source"] = source == QStarSource::known    ? "known"
                         : source == QStarSource::oracle ? "oracle"
                                                         : "long-run";
  doc["run"] = {{"status", to_string(result.status)},
                {"iterations", result.iterations()},
                {"final_q", result.final_q},
                {"final_residual", result.final_residual()}};
  doc["config"] = to_json(config);

  if (!config.csv_path.empty()) write_file(config.csv_path, trace_csv(result.trace));
  if (!config.json_path.empty()) {
    write_file(config.json_path, doc.dump(2) + "\n");
  } else {
    out << doc.dump(2) << '\n';
  }
  return kExitConverged;
}

namespace {

// Flags shared by every subcommand. Only flags present on the command line
// override the config file.
class RunFlags {
 public:
  explicit RunFlags(CLI::App* app) {
    app->add_option("--config", config_path_, "JSON run configuration")
        ->check(CLI::ExistingFile);
    add(app, "--problem", kind_, "lasso | quartic | l0quad | box_rosenbrock",
        [](RunConfig& c, const std::string& v) {
          c.problem.kind = problems::parse_problem_kind(v);
        });
    add(app, "--seed", seed_, "PRNG seed",
        [](RunConfig& c, std::uint64_t v) { c.problem.seed = v; });
    add(app, "--rows", rows_, "data rows (lasso, quartic)",
        [](RunConfig& c, long long v) { c.problem.rows = v; });
    add(app, "--cols", cols_, "problem dimension",
        [](RunConfig& c, long long v) { c.problem.cols = v; });
    add(app, "--lam", lam_, "regularization weight",
        [](RunConfig& c, double v) { c.problem.lam = v; });
    auto* center = app->add_option("--center", center_, "l0quad center c")
                       ->delimiter(',');
    appliers_.push_back([center, this](RunConfig& c) {
      if (center->count()) c.problem.center = center_;
    });
    add(app, "--variant", variant_, "average | max | monotone",
        [](RunConfig& c, const std::string& v) { c.solver.variant = parse_variant(v); });
    add(app, "--tau", tau_, "backtracking factor (> 1)",
        [](RunConfig& c, double v) { c.solver.tau = v; });
    add(app, "--gamma-min", gamma_min_, "lower bound for gamma_k^0",
        [](RunConfig& c, double v) { c.solver.gamma_min = v; });
    add(app, "--gamma-max", gamma_max_, "upper bound for gamma_k^0",
        [](RunConfig& c, double v) { c.solver.gamma_max = v; });
    add(app, "--delta", delta_, "sufficient decrease constant in (0, 1)",
        [](RunConfig& c, double v) { c.solver.delta = v; });
    add(app, "--p-min", p_min_, "averaging weight, 4/5 < p_min <= 1",
        [](RunConfig& c, double v) { c.solver.p_min = v; });
    add(app, "--m", m_, "max-merit memory",
        [](RunConfig& c, int v) { c.solver.m = v; });
    add(app, "--step-init", step_init_, "constant | bb",
        [](RunConfig& c, const std::string& v) { c.solver.step_init = parse_step_init(v); });
    add(app, "--tol", tol_, "residual tolerance",
        [](RunConfig& c, double v) { c.solver.tol = v; });
    add(app, "--max-iter", max_iter_, "iteration limit",
        [](RunConfig& c, long long v) { c.solver.max_iter = v; });
    add(app, "--mu", mu_, "partition constant (default: largest admissible)",
        [](RunConfig& c, double v) { c.solver.mu_diag = v; });
    add(app, "--csv", csv_, "trace / table CSV path",
        [](RunConfig& c, const std::string& v) { c.csv_path = v; });
    add(app, "--json", json_, "JSON summary path (default: stdout)",
        [](RunConfig& c, const std::string& v) { c.json_path = v; });
  }

  RunFlags(const RunFlags&) = delete;
  RunFlags& operator=(const RunFlags&) = delete;

  RunConfig resolve() const {
    RunConfig config;
    if (!config_path_.empty()) config = load_run_config(config_path_);
    for (const auto& apply : appliers_) apply(config);
    config.solver.validate();
    return config;
  }

 private:
  template <typename T, typename F>
  void add(CLI::App* app, const std::string& name, T& storage,
           const std::string& help, F setter) {
    auto* opt = app->add_option(name, storage, help);
    appliers_.push_back([opt, &storage, setter](RunConfig& c) {
      if (opt->count()) setter(c, storage);
    });
  }

  std::string config_path_;
  std::string kind_, variant_, step_init_, csv_, json_;
  std::uint64_t seed_ = 0;
  long long rows_ = 0, cols_ = 0, max_iter_ = 0;
  double lam_ = 0, tau_ = 0, gamma_min_ = 0, gamma_max_ = 0, delta_ = 0;
  double p_min_ = 0, tol_ = 0, mu_ = 0;
  int m_ = 0;
  std::vector<double> center_;
  std::vector<std::function<void(RunConfig&)>> appliers_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Nonmonotone proximal gradient solvers with convergence diagnostics", "npg"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "solve one problem and write its trace");
  auto* compare = app.add_subcommand("compare", "run monotone, average and max on one problem");
  auto* rates = app.add_subcommand("rates", "run and classify the convergence rate");
  RunFlags run_flags(run);
  RunFlags compare_flags(compare);
  RunFlags rate_flags(rates);
  std::string q_star_source = "long-run";
  rates->add_option("--q-star-source", q_star_source, "known | oracle | long-run")
      ->check(CLI::IsMember({"known", "oracle", "long-run"}));

  std::vector<const char*> argv{"npg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; everything else is a usage error.
    return app.exit(e, out, err) == 0 ? kExitConverged : kExitError;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags.resolve(), out, err);
    if (compare->parsed()) return cmd_compare(compare_flags.resolve(), out, err);
    const QStarSource source = q_star_source == "known"    ? QStarSource::known
                               : q_star_source == "oracle" ? QStarSource::oracle
                                                           : QStarSource::long_run;
    return cmd_rates(rate_flags.resolve(), source, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace npg::cli
