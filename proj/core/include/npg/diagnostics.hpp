#pragma once

// Post-hoc analysis of solver traces: partition flags, runtime invariant
// checks, a heuristic KL-exponent/rate classifier and a fixed-point
// stationarity residual.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "npg/config.hpp"
#include "npg/core.hpp"
#include "npg/solver.hpp"

namespace npg::diagnostics {

/// k in S iff q(x^k) - Phi_{k+1} <= mu/2 ||x^{k+1} - x^k||^2.
bool in_s(double q_k, double phi_next, double step_norm, double mu);

/// k in K iff q(x^{l(k+1)}) - q(x^{k+1}) > mu/2 ||x^{k+1} - x^k||^2.
bool in_k(double merit_next, double q_next, double step_norm, double mu);

struct PartitionReport {
  std::vector<PartitionFlag> flags;
  std::size_t in_set = 0;         // |S| or |K|
  std::size_t in_complement = 0;  // |S-bar| or |K-bar|
  double mu_used = 0.0;
};

/// Requires mu in (0, delta*p_min*gamma_min/2]; p_min is taken from config
/// (1 for the monotone variant).
PartitionReport partition_average(const Trace& trace, double mu,
                                  const SolverConfig& config);

/// Requires mu in (0, delta*gamma_min).
PartitionReport partition_max(const Trace& trace, double mu,
                              const SolverConfig& config);

struct RateReport {
  std::optional<double> theta_hat;
  std::optional<double> beta_hat;  // sublinear fit only: e_k ~ k^-beta
  RateClass rate_class = RateClass::inconclusive;
  double fit_quality = 0.0;        // R^2 of the selected regression
  double q_star_used = 0.0;
  std::size_t points_used = 0;
};

inline constexpr std::size_t kMinRateTraceLength = 30;
inline constexpr double kRateFitThreshold = 0.98;
inline constexpr double kRateErrorFloor = 1e-14;
inline constexpr std::size_t kMinFitPoints = 5;

/// Classifies the decay of e_k = merit_k - q_star.
///
/// Only the second half of the sequence is used, and e_k <= 1e-14*max(1,
/// |q_star|) is dropped as rounding noise. If fewer than five points survive
/// and the tail ends at the floor, the sequence reached q_star in finitely
/// many steps. Otherwise log e_k is regressed on k (geometric decay) and on
/// log k (power-law decay); the model with the larger R^2 wins if that R^2 is
/// at least 0.98. A power law k^-beta (beta > 0) is sublinear; theta_hat =
/// (beta - 1)/(2 beta) is reported only when beta > 1. merits[i] is taken as
/// the value at k = i + 1.
///
/// Throws ContractViolation if merits.size() < 30 or q_star exceeds the
/// smallest merit by more than 1e-12*max(1, |q_star|).
RateReport estimate_rate(std::span<const double> merits, double q_star);
RateReport estimate_rate(const Trace& trace, double q_star);

/// ||prox_g(x - grad f(x), 1) - x||. Zero exactly at prox fixed points.
double stationarity_check(const CompositeProblem& problem, const Vector& x);

/// Worst violation of each runtime invariant; <= 0 means satisfied. Merit
/// checks use tolerance 1e-12*max(1, |q(x0)|).
struct InvariantReport {
  double merit_increase = 0.0;       // max merit_{k+1} - merit_k
  double sandwich_lower = 0.0;       // average only
  double sandwich_upper = 0.0;       // average only
  double merit_below_q = 0.0;        // max q(x^k) - merit_k
  double sublevel_excess = 0.0;      // max q(x^k) - q(x0)
  double acceptance_excess = 0.0;    // acceptance inequality slack
  double gamma_below_min = 0.0;      // gamma_min - gamma_k
  double tolerance = 0.0;

  bool ok() const;
  std::vector<std::string> failures() const;
};

InvariantReport check_invariants(const RunResult& result,
                                 const SolverConfig& config);

/// max step_norm over the last `window` records <= 10 * tol / gamma_min.
bool steps_vanish(const Trace& trace, const SolverConfig& config,
                  std::size_t window = 10);

/// Over the last `window` records: the largest gamma is finite, the gammas are
/// not strictly increasing, and at least two of them lie within a factor tau
/// of the largest (the maximum repeats at backtracking resolution).
bool gamma_tail_bounded(const Trace& trace, const SolverConfig& config,
                        std::size_t window = 50);

/// True when two runs produced the same iterates: q, merit, gamma,
/// backtracks, step norm and residual agree bit for bit on every record, and
/// so do the final points. Partition flags are ignored since S and K are
/// different index sets.
bool same_iterates(const RunResult& a, const RunResult& b);

}  // namespace npg::diagnostics
