#include "npg/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "npg/splitmix64.hpp"

namespace npg::problems {

namespace {

void require_dims(const ProblemSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) {
    throw ContractViolation("problem spec: rows and cols must be >= 1");
  }
  if (!(spec.lam >= 0.0)) throw ContractViolation("problem spec: lam must be >= 0");
}

}  // namespace

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::lasso: return "lasso";
    case ProblemKind::quartic: return "quartic";
    case ProblemKind::l0quad: return "l0quad";
    case ProblemKind::box_rosenbrock: return "box_rosenbrock";
  }
  return "lasso";
}

ProblemKind parse_problem_kind(std::string_view text) {
  if (text == "lasso") return ProblemKind::lasso;
  if (text == "quartic") return ProblemKind::quartic;
  if (text == "l0quad") return ProblemKind::l0quad;
  if (text == "box_rosenbrock") return ProblemKind::box_rosenbrock;
  throw ContractViolation("unknown problem kind '" + std::string(text) +
                          "' (expected lasso, quartic, l0quad or box_rosenbrock)");
}

RegressionData make_regression_data(const ProblemSpec& spec) {
  require_dims(spec);
  SplitMix64 rng(spec.seed);
  const Eigen::Index m = spec.rows;
  const Eigen::Index n = spec.cols;

  RegressionData data;
  data.A.resize(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) data.A(i, j) = rng.normal();
  }

  const auto support_size = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::llround(0.1 * static_cast<double>(n))));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  for (Eigen::Index i = 0; i < support_size; ++i) {
    const auto pick = i + static_cast<Eigen::Index>(
                              rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(pick)]);
  }
  data.x_planted = Vector::Zero(n);
  for (Eigen::Index i = 0; i < support_size; ++i) {
    data.x_planted[order[static_cast<std::size_t>(i)]] = rng.normal();
  }

  Vector noise(m);
  for (Eigen::Index i = 0; i < m; ++i) noise[i] = rng.normal();
  data.b = data.A * data.x_planted + kNoiseLevel * noise;
  return data;
}

CompositeProblem make_lasso(const ProblemSpec& spec) {
  auto data = make_regression_data(spec);
  const Eigen::Index n = spec.cols;
  SmoothObjective smooth;
  smooth.dimension = n;
  smooth.value = [A = data.A, b = data.b](const Vector& x) {
    return 0.5 * (A * x - b).squaredNorm();
  };
  smooth.gradient = [A = data.A, b = data.b](const Vector& x) -> Vector {
    return A.transpose() * (A * x - b);
  };
  return {std::move(smooth), l1_regularizer(spec.lam), Vector::Zero(n),
          std::nullopt};
}

CompositeProblem make_quartic(const ProblemSpec& spec) {
  auto data = make_regression_data(spec);
  const Eigen::Index n = spec.cols;
  SmoothObjective smooth;
  smooth.dimension = n;
  smooth.value = [A = data.A, b = data.b](const Vector& x) {
    return 0.25 * (A * x - b).array().pow(4).sum();
  };
  smooth.gradient = [A = data.A, b = data.b](const Vector& x) -> Vector {
    const Vector r = A * x - b;
    return A.transpose() * r.array().cube().matrix();
  };
  return {std::move(smooth), l1_regularizer(spec.lam), Vector::Zero(n),
          std::nullopt};
}

Vector l0_center(const ProblemSpec& spec) {
  if (spec.center) {
    const auto& c = *spec.center;
    if (static_cast<Eigen::Index>(c.size()) != spec.cols) {
      throw ContractViolation("l0quad: center length must equal cols");
    }
    return Eigen::Map<const Vector>(c.data(), spec.cols);
  }
  SplitMix64 rng(spec.seed);
  Vector c(spec.cols);
  for (Eigen::Index i = 0; i < spec.cols; ++i) c[i] = rng.normal();
  return c;
}

CompositeProblem make_l0_quadratic(const ProblemSpec& spec) {
  if (spec.cols < 1) throw ContractViolation("l0quad: cols must be >= 1");
  if (spec.cols > kMaxL0Dimension) {
    throw ContractViolation("l0quad: cols must be <= 12 so the oracle can "
                            "enumerate every support");
  }
  if (!(spec.lam >= 0.0)) throw ContractViolation("l0quad: lam must be >= 0");
  const Vector c = l0_center(spec);
  SmoothObjective smooth;
  smooth.dimension = spec.cols;
  smooth.value = [c](const Vector& x) { return 0.5 * (x - c).squaredNorm(); };
  smooth.gradient = [c](const Vector& x) -> Vector { return x - c; };
  const double q_star = l0_bruteforce_oracle(c, spec.lam).q_star;
  return {std::move(smooth), l0_regularizer(spec.lam), Vector::Zero(spec.cols),
          q_star};
}

CompositeProblem make_box_rosenbrock() {
  SmoothObjective smooth;
  smooth.dimension = 2;
  smooth.value = [](const Vector& x) {
    const double a = x[1] - x[0] * x[0];
    const double b = 1.0 - x[0];
    return 100.0 * a * a + b * b;
  };
  smooth.gradient = [](const Vector& x) -> Vector {
    const double a = x[1] - x[0] * x[0];
    Vector g(2);
    g << -400.0 * x[0] * a - 2.0 * (1.0 - x[0]), 200.0 * a;
    return g;
  };
  Vector x0(2);
  x0 << -1.2, 1.0;
  return {std::move(smooth),
          box_indicator(Vector::Constant(2, -2.0), Vector::Constant(2, 2.0)),
          std::move(x0), 0.0};
}

CompositeProblem make_problem(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::lasso: return make_lasso(spec);
    case ProblemKind::quartic: return make_quartic(spec);
    case ProblemKind::l0quad: return make_l0_quadratic(spec);
    case ProblemKind::box_rosenbrock: return make_box_rosenbrock();
  }
  throw ContractViolation("unknown problem kind");
}

L0OracleResult l0_bruteforce_oracle(const Vector& center, double lam) {
  const auto n = center.size();
  if (n < 1 || n > kMaxL0Dimension) {
    throw ContractViolation("l0 oracle: dimension must lie in [1, 12]");
  }
  // Visit supports by cardinality, then lexicographic index list, and keep
  // the first strict improvement.
  std::vector<std::uint32_t> masks(std::size_t{1} << n);
  std::iota(masks.begin(), masks.end(), 0u);
  auto index_list = [n](std::uint32_t mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    return idx;
  };
  std::sort(masks.begin(), masks.end(), [&](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return index_list(a) < index_list(b);
  });

  L0OracleResult best{Vector::Zero(n), kInfinity};
  for (const auto mask : masks) {
    double q = lam * std::popcount(mask);
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) q += 0.5 * center[i] * center[i];
    }
    if (q < best.q_star) {
      best.q_star = q;
      for (int i = 0; i < n; ++i) {
        best.x_star[i] = (mask & (1u << i)) ? center[i] : 0.0;
      }
    }
  }
  return best;
}

double l0_support_value(const Vector& center, double lam, const Vector& x) {
  if (x.size() != center.size()) {
    throw ContractViolation("l0_support_value: dimension mismatch");
  }
  double q = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    q += x[i] != 0.0 ? lam : 0.5 * center[i] * center[i];
  }
  return q;
}

AssumptionReport check_assumptions(const CompositeProblem& problem,
                                   std::uint64_t probe_seed, int probes) {
  AssumptionReport report;
  report.q0_finite = std::isfinite(evaluate_q(problem, problem.x0));
  report.regularizer_nonnegative = true;
  SplitMix64 rng(probe_seed);
  for (int p = 0; p < probes; ++p) {
    Vector x(problem.dimension());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    if (problem.reg.value(x) < problem.reg.minorant_offset) {
      report.regularizer_nonnegative = false;
    }
    report.worst_gradient_error = std::max(
        report.worst_gradient_error, gradient_consistency(problem.smooth, x));
  }
  return report;
}

}  // namespace npg::problems
