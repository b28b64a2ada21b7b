#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "npg/problems.hpp"
#include "npg/solver.hpp"
#include "run_config.hpp"

namespace npg::cli {

// Exit codes.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMaxIter = 2;
inline constexpr int kExitMeritStall = 3;

int exit_code(RunStatus status);

enum class QStarSource { known, oracle, long_run };

/// Reference optimum for rate analysis. `known` uses the problem's
/// known_optimum, `oracle` the l0 support-stationary value at the reached
/// point (l0quad only), `long_run` a monotone run at tol 1e-14 for up to 1e6
/// iterations.
double resolve_q_star(QStarSource source, const RunConfig& config,
                      const CompositeProblem& problem, const RunResult& run);

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_rates(const RunConfig& config, QStarSource source, std::ostream& out,
              std::ostream& err);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace npg::cli
