#include "npg/merit.hpp"

#include <algorithm>
#include <cmath>

#include "npg/core.hpp"

namespace npg {

MeritState merit_init(double q0, const SolverConfig& config) {
  if (!std::isfinite(q0)) throw ContractViolation("merit_init: q0 must be finite");
  if (config.variant == Variant::max) {
    return MaxWindowMerit{{q0}, static_cast<std::size_t>(config.m), 0};
  }
  return AverageMerit{q0};
}

double merit_value(const MeritState& state) {
  if (const auto* avg = std::get_if<AverageMerit>(&state)) return avg->phi;
  const auto& window = std::get<MaxWindowMerit>(state).recent_q;
  return *std::max_element(window.begin(), window.end());
}

MeritState merit_update(MeritState state, double q_next, double p_k) {
  if (auto* avg = std::get_if<AverageMerit>(&state)) {
    avg->phi = (1.0 - p_k) * avg->phi + p_k * q_next;
    return state;
  }
  auto& window = std::get<MaxWindowMerit>(state);
  window.recent_q.push_back(q_next);
  while (window.recent_q.size() > window.m + 1) window.recent_q.pop_front();
  ++window.k;
  return state;
}

std::size_t window_size(const MeritState& state) {
  if (const auto* window = std::get_if<MaxWindowMerit>(&state)) {
    return window->recent_q.size();
  }
  return 1;
}

}  // namespace npg
