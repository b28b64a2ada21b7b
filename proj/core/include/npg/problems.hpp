#pragma once

// Reproducible test problems. All random data comes from SplitMix64 in a
// fixed draw order, so a ProblemSpec pins the problem bit for bit.
//
// Draw order for the regression kinds (lasso, quartic), from one generator
// seeded with spec.seed:
//   1. A, row-major, rows*cols standard normals;
//   2. the planted support: max(1, round(0.1*cols)) indices by partial
//      Fisher-Yates over [0, cols), one `below()` draw per index;
//   3. planted values, one standard normal per support index in draw order;
//   4. noise, rows standard normals; b = A x_planted + 0.01 * noise.
// The l0quad center, when not given explicitly, is cols standard normals.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "npg/core.hpp"

namespace npg::problems {

enum class ProblemKind { lasso, quartic, l0quad, box_rosenbrock };

std::string to_string(ProblemKind kind);
ProblemKind parse_problem_kind(std::string_view text);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::lasso;
  std::uint64_t seed = 42;
  Eigen::Index rows = 30;
  Eigen::Index cols = 20;
  double lam = 0.1;
  // l0quad only: explicit center c; overrides the seeded draw.
  std::optional<std::vector<double>> center;
};

struct RegressionData {
  Matrix A;
  Vector b;
  Vector x_planted;
};

inline constexpr double kNoiseLevel = 0.01;
inline constexpr Eigen::Index kMaxL0Dimension = 12;

RegressionData make_regression_data(const ProblemSpec& spec);

/// f = 1/2 ||Ax - b||^2, g = lam ||x||_1, x0 = 0.
CompositeProblem make_lasso(const ProblemSpec& spec);

/// f = 1/4 sum_i (a_i^T x - b_i)^4, g = lam ||x||_1, x0 = 0. The gradient is
/// locally but not globally Lipschitz.
CompositeProblem make_quartic(const ProblemSpec& spec);

/// c for the l0 quadratic: spec.center or cols seeded normals.
Vector l0_center(const ProblemSpec& spec);

/// f = 1/2 ||x - c||^2, g = lam ||x||_0, x0 = 0, cols <= 12. known_optimum is
/// set from the brute-force oracle.
CompositeProblem make_l0_quadratic(const ProblemSpec& spec);

/// 2-D Rosenbrock constrained to [-2, 2]^2 from (-1.2, 1); known optimum 0.
CompositeProblem make_box_rosenbrock();

CompositeProblem make_problem(const ProblemSpec& spec);

struct L0OracleResult {
  Vector x_star;
  double q_star = 0.0;
};

/// Global minimizer of 1/2||x - c||^2 + lam ||x||_0 by enumerating all 2^n
/// supports. Ties go to the smaller support, then the lexicographically
/// smaller index list.
L0OracleResult l0_bruteforce_oracle(const Vector& center, double lam);

/// Objective value of the best point sharing x's support: the support-wise
/// stationary value q = 1/2 sum_{i not in supp x} c_i^2 + lam |supp x|.
double l0_support_value(const Vector& center, double lam, const Vector& x);

/// Checks the standing assumptions at a few seeded probe points.
struct AssumptionReport {
  bool q0_finite = false;
  bool regularizer_nonnegative = false;
  double worst_gradient_error = 0.0;  // relative, from gradient_consistency

  bool ok(double gradient_tol) const {
    return q0_finite && regularizer_nonnegative &&
           worst_gradient_error <= gradient_tol;
  }
};

AssumptionReport check_assumptions(const CompositeProblem& problem,
                                   std::uint64_t probe_seed = 1,
                                   int probes = 5);

}  // namespace npg::problems
