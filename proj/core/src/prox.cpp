#include "npg/prox.hpp"

#include <algorithm>
#include <cmath>

namespace npg::prox {

Vector l1(const Vector& v, double w) {
  return v.unaryExpr([w](double vi) {
    const double shrunk = std::max(std::abs(vi) - w, 0.0);
    return std::copysign(shrunk, vi) + 0.0;  // +0.0 normalizes -0 to 0
  });
}

Vector l0(const Vector& v, double w) {
  return v.unaryExpr([w](double vi) { return 0.5 * vi * vi > w ? vi : 0.0; });
}

Vector project_box(const Vector& v, const Vector& lo, const Vector& hi) {
  if (lo.size() != v.size() || hi.size() != v.size()) {
    throw ContractViolation("project_box: dimension mismatch");
  }
  if ((lo.array() > hi.array()).any()) {
    throw ContractViolation("project_box: lo must be <= hi componentwise");
  }
  return v.cwiseMax(lo).cwiseMin(hi);
}

Vector subproblem_solve(const Vector& x, const Vector& grad, double gamma,
                        const Regularizer& reg) {
  if (!(gamma > 0.0)) throw ContractViolation("subproblem_solve: gamma must be > 0");
  Vector y = reg.prox(x - grad / gamma, 1.0 / gamma);
  if (!y.allFinite()) {
    throw SolverAbort("prox of regularizer '" + reg.name +
                      "' returned a non-finite point (gamma = " +
                      std::to_string(gamma) + ")");
  }
  return y;
}

}  // namespace npg::prox
