#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "npg/diagnostics.hpp"
#include "trace_io.hpp"

using namespace npg;
using namespace npg::cli;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
  const fs::path dir = fs::path(NPG_TEST_TMP_DIR) / "cli_tmp";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("run: lasso example writes trace and summary") {
  const auto csv = tmp("t.csv");
  const auto json = tmp("s.json");
  const auto r = invoke({"run", "--problem", "lasso", "--seed", "42", "--rows", "30",
                      "--cols", "20", "--lam", "0.1", "--variant", "average",
                      "--p-min", "0.9", "--tol", "1e-8", "--csv", csv, "--json", json});
  CHECK(r.code == 0);
  const auto rows = lines(slurp(csv));
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == "iter,q,merit,gamma,backtracks,step_norm,residual,partition");

  const auto summary = nlohmann::json::parse(slurp(json));
  CHECK(summary["status"] == "converged");
  CHECK(summary["iterations"].get<std::size_t>() == rows.size() - 1);
  CHECK(summary["final_residual"].get<double>() <= 1e-8);
  for (const char* key : {"final_q", "wall_time_ms", "stationarity", "x_final"}) {
    CHECK(summary.contains(key));
  }
  const auto& solver = summary["config"]["solver"];
  CHECK(solver["p_min"] == 0.9);
  CHECK(solver["tau"] == 2.0);
  CHECK(solver["delta"] == 1e-4);
  CHECK(solver["step_init"] == "bb");
  CHECK(solver["mu_diag"].get<double>() == doctest::Approx(0.5 * 1e-4 * 0.9 * 1e-8));
  CHECK(summary["config"]["problem"]["kind"] == "lasso");
}

TEST_CASE("run: p_min at 4/5 is rejected") {
  const auto r = invoke({"run", "--variant", "average", "--p-min", "0.8"});
  CHECK(r.code == 1);
  CHECK(r.err.find("4/5 < p_min") != std::string::npos);
}

TEST_CASE("run: l0quad max variant agrees with the support oracle") {
  const auto json = tmp("l0.json");
  const auto r = invoke({"run", "--problem", "l0quad", "--cols", "2", "--lam", "0.25",
                      "--variant", "max", "--m", "5", "--json", json});
  CHECK(r.code == 0);
  const auto summary = nlohmann::json::parse(slurp(json));
  const auto x = summary["x_final"].get<std::vector<double>>();
  problems::ProblemSpec spec;
  spec.kind = problems::ProblemKind::l0quad;
  spec.cols = 2;
  spec.lam = 0.25;
  const Vector xv = Eigen::Map<const Vector>(x.data(), 2);
  const double oracle = problems::l0_support_value(problems::l0_center(spec), 0.25, xv);
  CHECK(std::abs(summary["final_q"].get<double>() - oracle) <= 1e-8);
}

TEST_CASE("run: exit codes and errors") {
  CHECK(invoke({"run", "--max-iter", "2"}).code == 2);
  CHECK(invoke({"run", "--problem", "nope"}).code == 1);
  CHECK(invoke({"run", "--tau", "1"}).code == 1);
  CHECK(invoke({"run", "--csv", "/nonexistent-dir/x.csv"}).code == 1);
  CHECK(invoke({"run", "--bogus"}).code == 1);
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
  // Constant steps on the lasso run into the rounding floor before tol 1e-10.
  CHECK(invoke({"run", "--step-init", "constant", "--variant", "monotone"}).code == 3);
}

TEST_CASE("config file: defaults, overrides and unknown keys") {
  const auto path = tmp("config.json");
  {
    std::ofstream f(path);
    f << R"({"problem": {"kind": "quartic", "seed": 7},
             "solver": {"variant": "max", "m": 3, "tol": 1e-9, "mu_diag": "auto"}})";
  }
  const auto cfg = load_run_config(path);
  CHECK(cfg.problem.kind == problems::ProblemKind::quartic);
  CHECK(cfg.problem.seed == 7);
  CHECK(cfg.solver.variant == Variant::max);
  CHECK(cfg.solver.m == 3);
  CHECK(cfg.solver.tol == 1e-9);
  CHECK(cfg.solver.tau == 2.0);
  CHECK_FALSE(cfg.solver.mu_diag.has_value());

  const auto json = tmp("config_out.json");
  CHECK(invoke({"run", "--config", path, "--m", "4", "--json", json}).code == 0);
  const auto summary = nlohmann::json::parse(slurp(json));
  CHECK(summary["config"]["solver"]["m"] == 4);
  CHECK(summary["config"]["solver"]["tol"] == 1e-9);
  CHECK(summary["config"]["problem"]["seed"] == 7);

  // The echoed config loads back to the same settings.
  const auto echoed = tmp("echoed.json");
  {
    std::ofstream f(echoed);
    f << summary["config"].dump();
  }
  const auto again = load_run_config(echoed);
  CHECK(to_json(again) == summary["config"]);

  for (const char* bad : {R"({"solver": {"speed": 1}})", R"({"extra": {}})",
                          R"({"problem": {"kind": "lasso", "size": 3}})",
                          R"({"solver": {"tau": "fast"}})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(apply_json({}, nlohmann::json::parse(bad)), ContractViolation);
  }
  const auto bad_path = tmp("bad.json");
  {
    std::ofstream f(bad_path);
    f << R"({"solver": {"speed": 1}})";
  }
  const auto r = invoke({"run", "--config", bad_path});
  CHECK(r.code == 1);
  CHECK(r.err.find("solver.speed") != std::string::npos);
}

TEST_CASE("trace CSV round-trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 5e-324, -2.5e17, 0.28737625446341075}) {
    const auto text = format_double(v);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == v);
  }
  CHECK(format_double(kInfinity) == "inf");

  SolverConfig c;
  c.variant = Variant::max;
  const auto run = solve(problems::make_lasso({}), c);
  std::istringstream in(trace_csv(run.trace));
  const auto rows = read_trace_csv(in);
  REQUIRE(rows.size() == run.trace.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& rec = run.trace[k];
    CHECK(rows[k].iter == rec.k);
    CHECK(rows[k].q == rec.q);
    CHECK(rows[k].merit == rec.merit);
    CHECK(rows[k].gamma == rec.gamma);
    CHECK(rows[k].backtracks == rec.backtracks);
    CHECK(rows[k].step_norm == rec.step_norm);
    CHECK(rows[k].residual == rec.residual);
    CHECK((rows[k].partition == "K" || rows[k].partition == "Kbar"));
  }

  std::istringstream bad("iter,q\n");
  CHECK_THROWS_AS(read_trace_csv(bad), ContractViolation);
}

TEST_CASE("golden trace: one-dimensional quadratic") {
  CompositeProblem p;
  p.smooth = {[](const Vector& x) { return 0.5 * x.squaredNorm(); },
              [](const Vector& x) -> Vector { return x; }, 1};
  p.reg = zero_regularizer();
  p.x0 = Vector::Ones(1);
  SolverConfig c;
  c.variant = Variant::average;
  c.step_init = StepInit::constant;
  c.gamma_min = 1.0;
  c.gamma_max = 1.0;
  c.delta = 0.5;
  c.p_min = 1.0;
  c.tol = 1e-10;
  const auto run = solve(p, c);
  CHECK(trace_csv(run.trace) == slurp(std::string(NPG_GOLDEN_DIR) + "/quadratic_1d.csv"));

  c.variant = Variant::monotone;
  CHECK(trace_csv(solve(p, c).trace) == trace_csv(run.trace));
}

TEST_CASE("compare: table, degeneracy and exit codes") {
  SUBCASE("lasso table has three rows") {
    const auto r = invoke({"compare", "--problem", "lasso", "--seed", "42"});
    CHECK(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "variant,status,iterations,total_backtracks,final_q,final_residual");
    CHECK(rows[1].rfind("monotone,", 0) == 0);
    CHECK(rows[2].rfind("average,", 0) == 0);
    CHECK(rows[3].rfind("max,", 0) == 0);
  }
  SUBCASE("degenerate sweep notes the equivalence") {
    const auto r = invoke({"compare", "--p-min", "1", "--m", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("degeneracy equivalence (monotone, average p=1, max m=0): passed") !=
          std::string::npos);
  }
  SUBCASE("quartic: every variant converges") {
    const auto csv = tmp("compare.csv");
    const auto r = invoke({"compare", "--problem", "quartic", "--seed", "7", "--csv", csv});
    CHECK(r.code == 0);
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].find(",converged,") != std::string::npos);
    }
  }
}

TEST_CASE("rates") {
  SUBCASE("lasso against the long-run value") {
    const auto r = invoke({"rates", "--problem", "lasso", "--seed", "42"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["rate_class"] == "q_linear");
    CHECK(doc["q_star_source"] == "long-run");
    CHECK(doc["fit_quality"].get<double>() >= 0.98);
    CHECK(doc["theta_hat"] == 0.5);
  }
  SUBCASE("l0quad against the oracle") {
    const auto r = invoke({"rates", "--problem", "l0quad", "--cols", "2", "--lam", "0.25",
                        "--center", "1,0.3", "--variant", "max", "--step-init",
                        "constant", "--q-star-source", "oracle"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    const auto cls = doc["rate_class"].get<std::string>();
    CHECK((cls == "finite" || cls == "q_linear"));
    CHECK(doc["q_star_used"].get<double>() == doctest::Approx(0.295).epsilon(1e-12));
  }
  SUBCASE("short traces are refused") {
    const auto r = invoke({"rates", "--problem", "l0quad", "--cols", "2", "--lam", "0.25"});
    CHECK(r.code == 1);
    CHECK(r.err.find("trace too short") != std::string::npos);
  }
  SUBCASE("known optimum needs a problem that has one") {
    CHECK(invoke({"rates", "--problem", "lasso", "--q-star-source", "known"}).code == 1);
    CHECK(invoke({"rates", "--problem", "lasso", "--q-star-source", "oracle"}).code == 1);
  }
}
