#pragma once

// JSON run configuration:
//
//   {
//     "problem": {"kind", "seed", "m", "n", "lam", "center"},
//     "solver":  {"variant", "tau", "gamma_min", "gamma_max", "delta",
//                 "p_min", "m", "step_init", "tol", "max_iter", "mu_diag"},
//     "output":  {"csv_path", "json_path"}
//   }
//
// Every section and key is optional; absent keys keep their defaults and
// unknown keys are rejected. problem.m / problem.n are the data rows and
// columns; solver.m is the max-merit memory.

#include <string>

#include <json.hpp>

#include "npg/config.hpp"
#include "npg/problems.hpp"

namespace npg::cli {

struct RunConfig {
  problems::ProblemSpec problem;
  SolverConfig solver;
  std::string csv_path;
  std::string json_path;
};

/// Overlays `doc` onto `base`. Throws ContractViolation on unknown keys or
/// values of the wrong type.
RunConfig apply_json(RunConfig base, const nlohmann::json& doc);

RunConfig load_run_config(const std::string& path, RunConfig base = {});

/// Fully resolved config, defaults included.
nlohmann::json to_json(const RunConfig& config);

}  // namespace npg::cli
