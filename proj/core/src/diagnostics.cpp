#include "npg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace npg::diagnostics {

namespace {

struct LineFit {
  double slope = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = a + b t. R^2 is 0 when y is constant.
LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
  const auto n = static_cast<double>(t.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  if (stt == 0.0 || syy == 0.0) return fit;
  fit.slope = sty / stt;
  fit.r2 = (sty * sty) / (stt * syy);
  return fit;
}

void require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace

bool in_s(double q_k, double phi_next, double step_norm, double mu) {
  return q_k - phi_next <= 0.5 * mu * step_norm * step_norm;
}

bool in_k(double merit_next, double q_next, double step_norm, double mu) {
  return merit_next - q_next > 0.5 * mu * step_norm * step_norm;
}

PartitionReport partition_average(const Trace& trace, double mu,
                                  const SolverConfig& config) {
  const double upper = 0.5 * config.delta * config.effective_p_min() *
                       config.gamma_min;
  require(mu > 0.0 && mu <= upper,
          "partition_average: mu must lie in (0, delta*p_min*gamma_min/2]");
  PartitionReport report;
  report.mu_used = mu;
  report.flags.reserve(trace.size());
  for (const auto& rec : trace) {
    const bool member = in_s(rec.q, rec.merit_next, rec.step_norm, mu);
    report.flags.push_back(member ? PartitionFlag::in_s : PartitionFlag::in_s_bar);
    ++(member ? report.in_set : report.in_complement);
  }
  return report;
}

PartitionReport partition_max(const Trace& trace, double mu,
                              const SolverConfig& config) {
  require(mu > 0.0 && mu < config.delta * config.gamma_min,
          "partition_max: mu must lie in (0, delta*gamma_min)");
  PartitionReport report;
  report.mu_used = mu;
  report.flags.reserve(trace.size());
  for (const auto& rec : trace) {
    const bool member = in_k(rec.merit_next, rec.q_next, rec.step_norm, mu);
    report.flags.push_back(member ? PartitionFlag::in_k : PartitionFlag::in_k_bar);
    ++(member ? report.in_set : report.in_complement);
  }
  return report;
}

RateReport estimate_rate(std::span<const double> merits, double q_star) {
  require(merits.size() >= kMinRateTraceLength,
          "estimate_rate: trace too short (need at least 30 iterations)");
  const double scale = std::max(1.0, std::abs(q_star));
  const double lowest = *std::min_element(merits.begin(), merits.end());
  require(q_star <= lowest + 1e-12 * scale,
          "estimate_rate: q_star lies above the observed merit values");

  RateReport report;
  report.q_star_used = q_star;
  const double floor = kRateErrorFloor * scale;
  const std::size_t first = merits.size() / 2;

  std::vector<double> t, log_t, log_e;
  for (std::size_t k = first; k < merits.size(); ++k) {
    const double e = merits[k] - q_star;
    if (e <= floor) continue;
    const double iter = static_cast<double>(k + 1);
    t.push_back(iter);
    log_t.push_back(std::log(iter));
    log_e.push_back(std::log(e));
  }
  report.points_used = t.size();

  if (t.size() < kMinFitPoints) {
    if (merits.back() - q_star <= floor) {
      report.rate_class = RateClass::finite;
      report.theta_hat = 1.0;
      report.fit_quality = 1.0;
    }
    return report;
  }

  const LineFit geometric = fit_line(t, log_e);
  const LineFit power = fit_line(log_t, log_e);
  if (geometric.r2 >= power.r2) {
    report.fit_quality = geometric.r2;
    if (geometric.r2 >= kRateFitThreshold && geometric.slope < 0.0) {
      report.rate_class = RateClass::q_linear;
      report.theta_hat = 0.5;
    }
  } else {
    report.fit_quality = power.r2;
    const double beta = -power.slope;
    if (power.r2 >= kRateFitThreshold && beta > 0.0) {
      report.rate_class = RateClass::sublinear;
      report.beta_hat = beta;
      // beta = 1/(1 - 2 theta) has a solution in (0, 1/2) only for beta > 1.
      if (beta > 1.0) report.theta_hat = (beta - 1.0) / (2.0 * beta);
    }
  }
  return report;
}

RateReport estimate_rate(const Trace& trace, double q_star) {
  std::vector<double> merits;
  merits.reserve(trace.size());
  for (const auto& rec : trace) merits.push_back(rec.merit);
  return estimate_rate(std::span<const double>(merits), q_star);
}

double stationarity_check(const CompositeProblem& problem, const Vector& x) {
  require(std::isfinite(evaluate_q(problem, x)),
          "stationarity_check: q(x) must be finite");
  const Vector y = problem.reg.prox(x - problem.smooth.gradient(x), 1.0);
  return (y - x).norm();
}

bool InvariantReport::ok() const { return failures().empty(); }

std::vector<std::string> InvariantReport::failures() const {
  std::vector<std::string> out;
  auto check = [&](double value, const char* name) {
    if (value > tolerance) out.emplace_back(name);
  };
  check(merit_increase, "merit monotonicity");
  check(sandwich_lower, "sandwich lower bound");
  check(sandwich_upper, "sandwich upper bound");
  check(merit_below_q, "merit >= q");
  check(sublevel_excess, "sublevel containment");
  check(acceptance_excess, "acceptance certificate");
  if (gamma_below_min > 0.0) out.emplace_back("gamma >= gamma_min");
  return out;
}

InvariantReport check_invariants(const RunResult& result,
                                 const SolverConfig& config) {
  constexpr double lowest = std::numeric_limits<double>::lowest();
  InvariantReport r;
  r.tolerance = 1e-12 * std::max(1.0, std::abs(result.q0));
  r.merit_increase = r.sandwich_lower = r.sandwich_upper = lowest;
  r.merit_below_q = r.sublevel_excess = r.acceptance_excess = lowest;
  r.gamma_below_min = lowest;
  const bool average = config.variant != Variant::max;
  const double delta = config.delta;
  for (const auto& rec : result.trace) {
    const double s2 = rec.step_norm * rec.step_norm;
    r.merit_increase = std::max(r.merit_increase, rec.merit_next - rec.merit);
    r.merit_below_q = std::max({r.merit_below_q, rec.q - rec.merit,
                                rec.q_next - rec.merit_next});
    r.sublevel_excess = std::max(r.sublevel_excess, rec.q_next - result.q0);
    r.acceptance_excess =
        std::max(r.acceptance_excess,
                 rec.q_next - (rec.merit - delta * rec.gamma / 2.0 * s2));
    r.gamma_below_min = std::max(r.gamma_below_min, config.gamma_min - rec.gamma);
    if (average) {
      r.sandwich_lower = std::max(
          r.sandwich_lower,
          rec.q_next + delta * (1.0 - rec.p) * rec.gamma / 2.0 * s2 - rec.merit_next);
      r.sandwich_upper = std::max(
          r.sandwich_upper,
          rec.merit_next - (rec.merit - delta * rec.p * rec.gamma / 2.0 * s2));
    }
  }
  return r;
}

bool steps_vanish(const Trace& trace, const SolverConfig& config,
                  std::size_t window) {
  if (trace.empty()) return true;
  const std::size_t first = trace.size() > window ? trace.size() - window : 0;
  double largest = 0.0;
  for (std::size_t k = first; k < trace.size(); ++k) {
    largest = std::max(largest, trace[k].step_norm);
  }
  return largest <= 10.0 * config.tol / config.gamma_min;
}

bool gamma_tail_bounded(const Trace& trace, const SolverConfig& config,
                        std::size_t window) {
  if (trace.empty()) return true;
  const std::size_t first = trace.size() > window ? trace.size() - window : 0;
  double largest = 0.0;
  for (std::size_t k = first; k < trace.size(); ++k) {
    largest = std::max(largest, trace[k].gamma);
  }
  if (!std::isfinite(largest)) return false;
  // gamma is only resolved to one backtracking factor, so "the maximum
  // repeats" means two or more entries within a factor tau of it.
  std::size_t near_max = 0;
  bool strictly_increasing = trace.size() - first >= 2;
  for (std::size_t k = first; k < trace.size(); ++k) {
    if (trace[k].gamma * config.tau >= largest) ++near_max;
    if (k > first && !(trace[k].gamma > trace[k - 1].gamma)) {
      strictly_increasing = false;
    }
  }
  return !strictly_increasing && (near_max >= 2 || trace.size() - first == 1);
}

bool same_iterates(const RunResult& a, const RunResult& b) {
  if (a.trace.size() != b.trace.size()) return false;
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    const auto& x = a.trace[k];
    const auto& y = b.trace[k];
    if (x.q != y.q || x.merit != y.merit || x.gamma != y.gamma ||
        x.backtracks != y.backtracks || x.step_norm != y.step_norm ||
        x.residual != y.residual) {
      return false;
    }
  }
  return a.x_final.size() == b.x_final.size() && a.x_final == b.x_final;
}

}  // namespace npg::diagnostics
