#pragma once

#include <cstddef>
#include <deque>
#include <variant>

#include "npg/config.hpp"

namespace npg {

/// Weighted-average merit Phi_k.
struct AverageMerit {
  double phi = 0.0;
};

/// Sliding window of the most recent q-values; holds min(k, m) + 1 entries.
struct MaxWindowMerit {
  std::deque<double> recent_q;
  std::size_t m = 0;
  std::size_t k = 0;
};

using MeritState = std::variant<AverageMerit, MaxWindowMerit>;

/// Phi_0 = q0 for average/monotone, window [q0] for max.
MeritState merit_init(double q0, const SolverConfig& config);

/// Phi_k, or the maximum over the window.
double merit_value(const MeritState& state);

/// Phi' = (1 - p_k) Phi + p_k q_next for the average engine; push q_next and
/// evict the oldest entry beyond m + 1 for the window engine (p_k ignored).
MeritState merit_update(MeritState state, double q_next, double p_k);

std::size_t window_size(const MeritState& state);

}  // namespace npg
