#include "npg/core.hpp"

#include <cmath>
#include <utility>

#include "npg/prox.hpp"

namespace npg {

double evaluate_q(const CompositeProblem& problem, const Vector& x) {
  if (x.size() != problem.dimension()) {
    throw ContractViolation("evaluate_q: point has dimension " +
                            std::to_string(x.size()) + ", problem has " +
                            std::to_string(problem.dimension()));
  }
  const double g = problem.reg.value(x);
  if (g == kInfinity) return kInfinity;
  return problem.smooth.value(x) + g;
}

void validate(const CompositeProblem& problem) {
  if (!problem.smooth.value || !problem.smooth.gradient) {
    throw ContractViolation("problem: smooth callbacks are not set");
  }
  if (!problem.reg.value || !problem.reg.prox) {
    throw ContractViolation("problem: regularizer callbacks are not set");
  }
  if (problem.dimension() <= 0) {
    throw ContractViolation("problem: dimension must be positive");
  }
  if (problem.x0.size() != problem.dimension()) {
    throw ContractViolation("problem: x0 has the wrong dimension");
  }
  if (!std::isfinite(evaluate_q(problem, problem.x0))) {
    throw ContractViolation("problem: q(x0) must be finite");
  }
}

double gradient_consistency(const SmoothObjective& smooth, const Vector& x,
                            double step) {
  const Vector grad = smooth.gradient(x);
  Vector fd(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    probe[i] = x[i] + h;
    const double up = smooth.value(probe);
    probe[i] = x[i] - h;
    const double down = smooth.value(probe);
    probe[i] = x[i];
    fd[i] = (up - down) / (2.0 * h);
  }
  return (fd - grad).norm() / std::max(1.0, grad.norm());
}

Regularizer zero_regularizer() {
  return {"zero", [](const Vector&) { return 0.0; },
          [](const Vector& v, double) { return v; }, 0.0};
}

Regularizer l1_regularizer(double lam) {
  if (!(lam >= 0.0)) throw ContractViolation("l1: lam must be >= 0");
  return {"l1", [lam](const Vector& x) { return lam * x.lpNorm<1>(); },
          [lam](const Vector& v, double w) { return prox::l1(v, lam * w); },
          0.0};
}

Regularizer l0_regularizer(double lam) {
  if (!(lam >= 0.0)) throw ContractViolation("l0: lam must be >= 0");
  return {"l0",
          [lam](const Vector& x) {
            return lam * static_cast<double>((x.array() != 0.0).count());
          },
          [lam](const Vector& v, double w) { return prox::l0(v, lam * w); },
          0.0};
}

Regularizer box_indicator(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || (lo.array() > hi.array()).any()) {
    throw ContractViolation("box: need lo <= hi componentwise");
  }
  auto value = [lo, hi](const Vector& x) {
    const bool inside = (x.array() >= lo.array()).all() &&
                        (x.array() <= hi.array()).all();
    return inside ? 0.0 : kInfinity;
  };
  auto project = [lo = std::move(lo), hi = std::move(hi)](const Vector& v,
                                                          double) {
    return prox::project_box(v, lo, hi);
  };
  return {"box", std::move(value), std::move(project), 0.0};
}

RateModel::RateModel(double kappa, double theta) : kappa(kappa), theta(theta) {
  if (!(kappa > 0.0)) throw ContractViolation("RateModel: kappa must be > 0");
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw ContractViolation("RateModel: theta must lie in (0, 1]");
  }
}

double RateModel::operator()(double t) const {
  return kappa * std::pow(t, theta);
}

RateClass RateModel::classify_theta(double theta) {
  if (theta == 1.0) return RateClass::finite;
  if (theta >= 0.5 && theta < 1.0) return RateClass::q_linear;
  if (theta > 0.0 && theta < 0.5) return RateClass::sublinear;
  return RateClass::inconclusive;
}

std::string to_string(RateClass rate_class) {
  switch (rate_class) {
    case RateClass::finite: return "finite";
    case RateClass::q_linear: return "q_linear";
    case RateClass::sublinear: return "sublinear";
    case RateClass::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace npg
