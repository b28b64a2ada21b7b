#pragma once

// Closed-form proximal maps. The weight convention is w = 1/gamma: the
// linearized subproblem
//   min_x <grad, x - x_k> + gamma/2 ||x - x_k||^2 + g(x)
// has the same minimizers as w*g(x) + 1/2 ||x - v||^2 with
// v = x_k - grad/gamma and w = 1/gamma.

#include "npg/core.hpp"

namespace npg::prox {

/// Soft thresholding: sign(v_i) * max(|v_i| - w, 0).
Vector l1(const Vector& v, double w);

/// Hard thresholding for ||.||_0. Keeps v_i iff v_i^2/2 > w; the tie
/// v_i^2/2 == w resolves to 0.
Vector l0(const Vector& v, double w);

/// Componentwise clamp into [lo, hi]. Throws ContractViolation if lo_i > hi_i
/// or the sizes disagree.
Vector project_box(const Vector& v, const Vector& lo, const Vector& hi);

/// One solution of the linearized subproblem at x with curvature gamma.
/// Throws SolverAbort if the regularizer's prox produces a non-finite point.
Vector subproblem_solve(const Vector& x, const Vector& grad, double gamma,
                        const Regularizer& reg);

}  // namespace npg::prox
