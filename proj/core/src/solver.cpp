#include "npg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npg/diagnostics.hpp"
#include "npg/merit.hpp"
#include "npg/prox.hpp"

namespace npg {

namespace {

// Stall guard: merit decrease at most this fraction of max(1, |q(x0)|) for
// kStallIterations consecutive iterations while the residual is above tol.
constexpr double kStallDecrease = 1e-15;
constexpr int kStallIterations = 50;

// Single driver for every variant; only the merit engine differs, so the
// degenerate settings (p = 1, m = 0, monotone) follow identical arithmetic.
RunResult run(const CompositeProblem& problem, const SolverConfig& config) {
  config.validate();
  validate(problem);
  const auto start = std::chrono::steady_clock::now();

  RunResult result;
  Vector x = problem.x0;
  double q = evaluate_q(problem, x);
  result.q0 = q;
  result.mu_used = config.resolved_mu();
  const double scale = std::max(1.0, std::abs(q));
  const bool windowed = config.variant == Variant::max;

  MeritState merit = merit_init(q, config);
  Vector grad = problem.smooth.gradient(x);
  std::optional<StepHistory> history;
  int stalled = 0;

  result.status = RunStatus::max_iter;
  for (std::int64_t k = 0; k < config.max_iter; ++k) {
    const double merit_k = merit_value(merit);
    const double gamma0 = initial_stepsize(history, config);
    BacktrackOutcome outcome =
        backtrack(x, grad, merit_k, gamma0, problem, config);

    const double p_k = windowed ? 1.0 : config.p_at(k);
    merit = merit_update(std::move(merit), outcome.q_next, p_k);
    const double merit_next = merit_value(merit);

    IterationRecord rec;
    rec.k = k;
    rec.q = q;
    rec.merit = merit_k;
    rec.gamma = outcome.gamma_accepted;
    rec.backtracks = outcome.backtracks;
    rec.step_norm = (outcome.x_next - x).norm();
    rec.residual = residual(rec.gamma, rec.step_norm);
    rec.q_next = outcome.q_next;
    rec.merit_next = merit_next;
    rec.p = p_k;
    if (windowed) {
      rec.partition = diagnostics::in_k(merit_next, outcome.q_next,
                                        rec.step_norm, result.mu_used)
                          ? PartitionFlag::in_k
                          : PartitionFlag::in_k_bar;
    } else {
      rec.partition = diagnostics::in_s(q, merit_next, rec.step_norm,
                                        result.mu_used)
                          ? PartitionFlag::in_s
                          : PartitionFlag::in_s_bar;
    }
    result.trace.push_back(rec);

    Vector grad_next = problem.smooth.gradient(outcome.x_next);
    if (config.step_init == StepInit::bb) {
      history = StepHistory{x, outcome.x_next, grad, grad_next};
    }
    x = std::move(outcome.x_next);
    grad = std::move(grad_next);
    q = outcome.q_next;

    if (rec.residual <= config.tol) {
      result.status = RunStatus::converged;
      break;
    }
    stalled = (merit_k - merit_next <= kStallDecrease * scale) ? stalled + 1 : 0;
    if (stalled >= kStallIterations) {
      result.status = RunStatus::merit_stall;
      break;
    }
  }

  result.x_final = std::move(x);
  result.final_q = q;
  result.final_merit = merit_value(merit);
  result.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

}  // namespace

std::string to_string(PartitionFlag flag) {
  switch (flag) {
    case PartitionFlag::none: return "none";
    case PartitionFlag::in_s: return "S";
    case PartitionFlag::in_s_bar: return "Sbar";
    case PartitionFlag::in_k: return "K";
    case PartitionFlag::in_k_bar: return "Kbar";
  }
  return "none";
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iter: return "max_iter";
    case RunStatus::merit_stall: return "merit_stall";
  }
  return "max_iter";
}

double initial_stepsize(const std::optional<StepHistory>& history,
                        const SolverConfig& config) {
  if (config.step_init == StepInit::constant || !history) {
    return config.gamma_min;
  }
  const Vector s = history->x_curr - history->x_prev;
  const Vector y = history->grad_curr - history->grad_prev;
  const double ss = s.squaredNorm();
  const double sy = s.dot(y);
  if (ss == 0.0 || !(sy > 0.0)) return config.gamma_min;
  return std::clamp(sy / ss, config.gamma_min, config.gamma_max);
}

BacktrackOutcome backtrack(const Vector& x, const Vector& grad, double merit,
                           double gamma0, const CompositeProblem& problem,
                           const SolverConfig& config) {
  if (!(gamma0 > 0.0)) throw ContractViolation("backtrack: gamma0 must be > 0");
  for (int i = 0; i <= config.max_backtracks; ++i) {
    const double gamma = std::pow(config.tau, i) * gamma0;
    Vector candidate = prox::subproblem_solve(x, grad, gamma, problem.reg);
    const double q_candidate = evaluate_q(problem, candidate);
    const double dist2 = (candidate - x).squaredNorm();
    // NaN fails the comparison, so it is rejected like +inf.
    if (q_candidate != kInfinity &&
        q_candidate <= merit - config.delta * gamma / 2.0 * dist2) {
      return {std::move(candidate), gamma, i, q_candidate};
    }
  }
  throw SolverAbort("backtracking exceeded " +
                    std::to_string(config.max_backtracks) +
                    " amplifications of gamma; the local curvature of f looks "
                    "non-finite or g violates its affine minorant");
}

BacktrackOutcome backtrack(const Vector& x, double merit, double gamma0,
                           const CompositeProblem& problem,
                           const SolverConfig& config) {
  return backtrack(x, problem.smooth.gradient(x), merit, gamma0, problem,
                   config);
}

double residual(double gamma_k, double step_norm) {
  if (gamma_k < 0.0 || step_norm < 0.0) {
    throw ContractViolation("residual: inputs must be nonnegative");
  }
  return gamma_k * step_norm;
}

RunResult npg_average(const CompositeProblem& problem,
                      const SolverConfig& config) {
  if (config.variant == Variant::max) {
    throw ContractViolation("npg_average: config.variant must be average or monotone");
  }
  return run(problem, config);
}

RunResult npg_max(const CompositeProblem& problem, const SolverConfig& config) {
  if (config.variant != Variant::max) {
    throw ContractViolation("npg_max: config.variant must be max");
  }
  return run(problem, config);
}

RunResult solve(const CompositeProblem& problem, const SolverConfig& config) {
  return config.variant == Variant::max ? npg_max(problem, config)
                                        : npg_average(problem, config);
}

}  // namespace npg
