#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "npg/config.hpp"
#include "npg/core.hpp"

namespace npg {

/// Membership of an iteration index in the proof partitions: S / S-bar for
/// the average merit, K / K-bar for the max merit.
enum class PartitionFlag { none, in_s, in_s_bar, in_k, in_k_bar };

std::string to_string(PartitionFlag flag);

/// Telemetry for iteration k, i.e. the step x^k -> x^{k+1}.
struct IterationRecord {
  std::int64_t k = 0;
  double q = 0.0;            // q(x^k)
  double merit = 0.0;        // Phi_k or q(x^{l(k)}), the value x^{k+1} had to undercut
  double gamma = 0.0;        // accepted gamma_k
  int backtracks = 0;        // i_k
  double step_norm = 0.0;    // ||x^{k+1} - x^k||
  double residual = 0.0;     // gamma_k * step_norm
  PartitionFlag partition = PartitionFlag::none;
  // Not serialized; kept so invariants can be checked from the record alone.
  double q_next = 0.0;       // q(x^{k+1})
  double merit_next = 0.0;   // Phi_{k+1} or q(x^{l(k+1)})
  double p = 1.0;            // p_k (1 for the max engine)
};

using Trace = std::vector<IterationRecord>;

enum class RunStatus { converged, max_iter, merit_stall };

std::string to_string(RunStatus status);

struct RunResult {
  Vector x_final;
  RunStatus status = RunStatus::max_iter;
  Trace trace;
  std::chrono::nanoseconds wall_time{0};
  double q0 = 0.0;
  double final_q = 0.0;
  double final_merit = 0.0;
  double mu_used = 0.0;

  double final_residual() const {
    return trace.empty() ? 0.0 : trace.back().residual;
  }
  std::int64_t iterations() const {
    return static_cast<std::int64_t>(trace.size());
  }
};

/// Last two iterates and their gradients, for the spectral step rule.
struct StepHistory {
  Vector x_prev;
  Vector x_curr;
  Vector grad_prev;
  Vector grad_curr;
};

/// gamma_k^0. Constant rule: gamma_min. BB rule: <s,y>/<s,s> clamped to
/// [gamma_min, gamma_max], falling back to gamma_min without history, when
/// <s,s> = 0 or when <s,y> <= 0.
double initial_stepsize(const std::optional<StepHistory>& history,
                        const SolverConfig& config);

struct BacktrackOutcome {
  Vector x_next;
  double gamma_accepted = 0.0;
  int backtracks = 0;
  double q_next = 0.0;
};

/// Tries gamma = tau^i * gamma0 for i = 0, 1, ... and returns the first
/// candidate with q(candidate) <= merit - delta*gamma/2 * ||candidate - x||^2.
/// Candidates with q = +inf (or NaN) are never accepted. Throws SolverAbort
/// once i would exceed config.max_backtracks.
BacktrackOutcome backtrack(const Vector& x, const Vector& grad, double merit,
                           double gamma0, const CompositeProblem& problem,
                           const SolverConfig& config);

/// Convenience overload computing grad f(x) itself.
BacktrackOutcome backtrack(const Vector& x, double merit, double gamma0,
                           const CompositeProblem& problem,
                           const SolverConfig& config);

/// gamma_k * ||x^{k+1} - x^k||.
double residual(double gamma_k, double step_norm);

/// Average line search. Also serves variant = monotone (p_k = 1).
RunResult npg_average(const CompositeProblem& problem,
                      const SolverConfig& config);

/// Max line search over the last min(k, m) + 1 objective values.
RunResult npg_max(const CompositeProblem& problem, const SolverConfig& config);

/// Dispatches on config.variant.
RunResult solve(const CompositeProblem& problem, const SolverConfig& config);

}  // namespace npg
