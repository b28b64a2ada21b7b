#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace npg {

enum class Variant { average, max, monotone };
enum class StepInit { constant, bb };

std::string to_string(Variant variant);
std::string to_string(StepInit rule);
Variant parse_variant(std::string_view text);
StepInit parse_step_init(std::string_view text);

/// Parameters shared by every solver variant.
///
/// `p_min` and `p_schedule` only affect the average variant; `m` only affects
/// the max variant. The monotone variant runs the average loop with p = 1.
struct SolverConfig {
  Variant variant = Variant::average;
  double tau = 2.0;
  double gamma_min = 1e-8;
  double gamma_max = 1e8;
  double delta = 1e-4;
  double p_min = 0.85;
  // Maps the iteration index to p_k. Empty means p_k = p_min.
  std::function<double(std::int64_t)> p_schedule;
  int m = 5;
  StepInit step_init = StepInit::bb;
  double tol = 1e-10;
  std::int64_t max_iter = 100000;
  int max_backtracks = 100;
  // nullopt selects the largest admissible partition constant.
  std::optional<double> mu_diag;

  /// Throws ContractViolation naming the first offending parameter.
  void validate() const;

  /// Averaging weight used at iteration k; 1 for the monotone variant.
  double p_at(std::int64_t k) const;

  /// p_min as seen by the merit update (1 for monotone).
  double effective_p_min() const;

  /// Partition constant: mu_diag if set, otherwise 0.5*delta*p_min*gamma_min
  /// (average, monotone) or 0.5*delta*gamma_min (max).
  double resolved_mu() const;
};

}  // namespace npg
