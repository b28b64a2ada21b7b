#pragma once

// Problem abstraction for composite minimization q(x) = f(x) + g(x), with f
// smooth (value + gradient) and g lower semicontinuous, possibly taking +inf.

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace npg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a solver run cannot continue (non-finite prox output,
/// backtracking cap exceeded).
class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smooth part f. Both callbacks must be total on finite points.
struct SmoothObjective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  Eigen::Index dimension = 0;
};

/// Nonsmooth part g.
///
/// `prox(v, w)` returns one global minimizer of w*g(x) + 0.5*||x - v||^2.
/// For nonconvex g the minimizer set may not be a singleton; implementations
/// must pick a deterministic selection. `minorant` documents the affine lower
/// bound g(x) >= <slope, x> + offset; every shipped regularizer is
/// nonnegative, so slope = 0 and offset = 0.
struct Regularizer {
  std::string name;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&, double)> prox;
  double minorant_offset = 0.0;
};

struct CompositeProblem {
  SmoothObjective smooth;
  Regularizer reg;
  Vector x0;
  std::optional<double> known_optimum;

  Eigen::Index dimension() const { return smooth.dimension; }
};

/// q(x) = f(x) + g(x). Returns +inf exactly when g(x) = +inf, so f is never
/// evaluated outside dom g.
double evaluate_q(const CompositeProblem& problem, const Vector& x);

/// Throws ContractViolation unless callbacks are set, x0 has the problem's
/// dimension and q(x0) is finite.
void validate(const CompositeProblem& problem);

/// Relative agreement between the analytic gradient and central finite
/// differences of f at x: ||fd - grad|| / max(1, ||grad||).
double gradient_consistency(const SmoothObjective& smooth, const Vector& x,
                            double step = 1e-6);

// Regularizer factories. `lam` scales the norm; weights passed to prox are
// multiplied by it.
Regularizer zero_regularizer();
Regularizer l1_regularizer(double lam);
Regularizer l0_regularizer(double lam);
Regularizer box_indicator(Vector lo, Vector hi);

/// Power-form desingularization chi(t) = kappa * t^theta and the convergence
/// regime its exponent implies.
enum class RateClass { finite, q_linear, sublinear, inconclusive };

struct RateModel {
  double kappa = 1.0;
  double theta = 0.5;

  RateModel() = default;
  RateModel(double kappa, double theta);

  double operator()(double t) const;
  RateClass rate_class() const { return classify_theta(theta); }

  // theta = 1 -> finite, [1/2, 1) -> q_linear, (0, 1/2) -> sublinear.
  static RateClass classify_theta(double theta);
};

std::string to_string(RateClass rate_class);

}  // namespace npg
