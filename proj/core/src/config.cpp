#include "npg/config.hpp"

#include <cmath>
#include <string>

#include "npg/core.hpp"

namespace npg {

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::average: return "average";
    case Variant::max: return "max";
    case Variant::monotone: return "monotone";
  }
  return "average";
}

std::string to_string(StepInit rule) {
  return rule == StepInit::bb ? "bb" : "constant";
}

Variant parse_variant(std::string_view text) {
  if (text == "average") return Variant::average;
  if (text == "max") return Variant::max;
  if (text == "monotone") return Variant::monotone;
  throw ContractViolation("unknown variant '" + std::string(text) +
                          "' (expected average, max or monotone)");
}

StepInit parse_step_init(std::string_view text) {
  if (text == "constant") return StepInit::constant;
  if (text == "bb") return StepInit::bb;
  throw ContractViolation("unknown step_init '" + std::string(text) +
                          "' (expected constant or bb)");
}

void SolverConfig::validate() const {
  if (!(tau > 1.0)) throw ContractViolation("tau must be > 1");
  if (!(gamma_min > 0.0)) throw ContractViolation("gamma_min must be > 0");
  if (!(gamma_max >= gamma_min) || !std::isfinite(gamma_max)) {
    throw ContractViolation("gamma_max must be finite and >= gamma_min");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ContractViolation("delta must lie in (0, 1)");
  }
  // The average-merit analysis needs 1/2 - sqrt((1 - p_min)/p_min) > 0,
  // i.e. p_min strictly above 4/5.
  if (!(p_min > 0.8 && p_min <= 1.0)) {
    throw ContractViolation("p_min must satisfy 4/5 < p_min <= 1 (got " +
                            std::to_string(p_min) + ")");
  }
  if (m < 0) throw ContractViolation("m must be >= 0");
  if (!(tol > 0.0)) throw ContractViolation("tol must be > 0");
  if (max_iter <= 0) throw ContractViolation("max_iter must be > 0");
  if (max_backtracks < 0) throw ContractViolation("max_backtracks must be >= 0");
  if (mu_diag && !(*mu_diag > 0.0)) {
    throw ContractViolation("mu_diag must be > 0");
  }
}

double SolverConfig::p_at(std::int64_t k) const {
  if (variant == Variant::monotone) return 1.0;
  if (!p_schedule) return p_min;
  const double p = p_schedule(k);
  if (!(p >= p_min && p <= 1.0)) {
    throw ContractViolation("p_schedule produced p_k outside [p_min, 1]");
  }
  return p;
}

double SolverConfig::effective_p_min() const {
  return variant == Variant::monotone ? 1.0 : p_min;
}

double SolverConfig::resolved_mu() const {
  if (mu_diag) return *mu_diag;
  if (variant == Variant::max) return 0.5 * delta * gamma_min;
  return 0.5 * delta * effective_p_min() * gamma_min;
}

}  // namespace npg
