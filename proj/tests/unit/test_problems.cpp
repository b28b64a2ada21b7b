#include <doctest.h>

#include <cmath>

#include "npg/problems.hpp"
#include "npg/solver.hpp"
#include "npg/splitmix64.hpp"

using namespace npg;
using problems::ProblemKind;
using problems::ProblemSpec;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

ProblemSpec l0_spec(std::vector<double> c, double lam) {
  ProblemSpec s;
  s.kind = ProblemKind::l0quad;
  s.cols = static_cast<Eigen::Index>(c.size());
  s.lam = lam;
  s.center = std::move(c);
  return s;
}

}  // namespace

TEST_CASE("SplitMix64 reference outputs") {
  // Published reference values for seed 1234567.
  SplitMix64 rng(1234567);
  CHECK(rng() == 6457827717110365317ULL);
  CHECK(rng() == 3203168211198807973ULL);
  CHECK(rng() == 9817491932198370423ULL);
  CHECK(rng() == 4593380528125082431ULL);
  CHECK(rng() == 16408922859458223821ULL);
}

TEST_CASE("SplitMix64 draws stay in range") {
  SplitMix64 rng(3);
  double mean = 0.0, sq = 0.0;
  constexpr int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    const auto b = rng.below(7);
    CHECK(b < 7);
    const double z = rng.normal();
    mean += z;
    sq += z * z;
  }
  CHECK(std::abs(mean / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("lasso data") {
  const ProblemSpec spec;
  const auto a = problems::make_regression_data(spec);
  const auto b = problems::make_regression_data(spec);
  CHECK(a.A.rows() == 30);
  CHECK(a.A.cols() == 20);
  CHECK(a.A == b.A);
  CHECK(a.b == b.b);
  CHECK((a.x_planted.array() != 0.0).count() == 2);

  ProblemSpec other = spec;
  other.seed = 43;
  CHECK(problems::make_regression_data(other).A != a.A);

  const auto p = problems::make_lasso(spec);
  CHECK(p.x0 == Vector::Zero(20));
  CHECK(p.reg.name == "l1");
  SplitMix64 rng(11);
  for (int t = 0; t < 5; ++t) {
    Vector x(20);
    for (auto& xi : x) xi = rng.normal();
    CHECK(gradient_consistency(p.smooth, x) <= 1e-6);
    const Vector r = a.A * x - a.b;
    CHECK(p.smooth.value(x) == doctest::Approx(0.5 * r.squaredNorm()).epsilon(1e-14));
  }
}

TEST_CASE("scalar least squares limit is b/a") {
  ProblemSpec spec;
  spec.rows = 1;
  spec.cols = 1;
  spec.lam = 0.0;
  const auto data = problems::make_regression_data(spec);
  SolverConfig c;
  c.tol = 1e-12;
  const auto r = solve(problems::make_lasso(spec), c);
  CHECK(r.status == RunStatus::converged);
  CHECK(r.x_final[0] == doctest::Approx(data.b[0] / data.A(0, 0)).epsilon(1e-10));
}

TEST_CASE("quartic") {
  ProblemSpec spec;
  spec.kind = ProblemKind::quartic;
  spec.seed = 7;
  const auto p = problems::make_quartic(spec);
  const auto data = problems::make_regression_data(spec);
  CHECK(p.x0 == Vector::Zero(20));
  SplitMix64 rng(12);
  for (int t = 0; t < 5; ++t) {
    Vector x(20);
    for (auto& xi : x) xi = 0.5 * rng.normal();
    CHECK(gradient_consistency(p.smooth, x) <= 1e-5);
    const Vector r = data.A * x - data.b;
    CHECK(p.smooth.value(x) ==
          doctest::Approx(0.25 * r.array().pow(4).sum()).epsilon(1e-13));
  }

  // Difference quotients of the gradient along e1 keep growing.
  auto grad_at = [&](double t) { return p.smooth.gradient(t * Vector::Unit(20, 0)); };
  const double q12 = (grad_at(2) - grad_at(1)).norm() / 1.0;
  const double q24 = (grad_at(4) - grad_at(2)).norm() / 2.0;
  const double q48 = (grad_at(8) - grad_at(4)).norm() / 4.0;
  CHECK(q12 < q24);
  CHECK(q24 < q48);

  CHECK(problems::make_quartic(spec).smooth.value(Vector::Ones(20)) ==
        p.smooth.value(Vector::Ones(20)));
}

TEST_CASE("l0 oracle examples") {
  const auto a = problems::l0_bruteforce_oracle(vec({1, 0.3}), 0.25);
  CHECK(a.x_star == vec({1, 0}));
  CHECK(a.q_star == 0.5 * 0.3 * 0.3 + 0.25);
  CHECK(a.q_star == doctest::Approx(0.295).epsilon(1e-15));

  const auto zero_lam = problems::l0_bruteforce_oracle(vec({1, -0.3, 2}), 0.0);
  CHECK(zero_lam.x_star == vec({1, -0.3, 2}));
  CHECK(zero_lam.q_star == 0.0);

  const auto big_lam = problems::l0_bruteforce_oracle(vec({1, -0.3, 2}), 2.5);
  CHECK(big_lam.x_star == Vector::Zero(3));

  for (double lam : {0.0, 0.5, 3.0}) {
    const auto origin = problems::l0_bruteforce_oracle(Vector::Zero(2), lam);
    CHECK(origin.x_star == Vector::Zero(2));
    CHECK(origin.q_star == 0.0);
  }

  const auto tie = problems::l0_bruteforce_oracle(vec({1, 1}), 0.5);
  CHECK(tie.x_star == Vector::Zero(2));
  CHECK(tie.q_star == 1.0);

  CHECK_THROWS_AS(problems::l0_bruteforce_oracle(Vector::Ones(13), 0.1),
                  ContractViolation);
}

TEST_CASE("l0 oracle matches a grid search") {
  SplitMix64 rng(21);
  for (int t = 0; t < 10; ++t) {
    const Vector c = vec({2.0 * rng.normal(), 2.0 * rng.normal()});
    const double lam = 0.05 + rng.uniform();
    // Grid through 0 with step 1e-3; the l0 kink sits at the axes, which the
    // grid contains, and the smooth part moves by at most ~1e-6 between points.
    double best = kInfinity;
    for (int i = -8000; i <= 8000; i += 1) {
      const double x = 1e-3 * i;
      const double fx = 0.5 * (x - c[0]) * (x - c[0]) + (x != 0.0 ? lam : 0.0);
      for (int j = -8000; j <= 8000; j += 8) {
        const double y = 1e-3 * j;
        best = std::min(best, fx + 0.5 * (y - c[1]) * (y - c[1]) + (y != 0.0 ? lam : 0.0));
      }
    }
    const auto o = problems::l0_bruteforce_oracle(c, lam);
    CAPTURE(c.transpose());
    CHECK(o.q_star <= best + 1e-12);
    CHECK(o.q_star >= best - 2e-5);
  }
}

TEST_CASE("l0 quadratic problem") {
  const auto p = problems::make_l0_quadratic(l0_spec({1, 0.3}, 0.25));
  REQUIRE(p.known_optimum.has_value());
  CHECK(*p.known_optimum == doctest::Approx(0.295).epsilon(1e-15));
  CHECK(p.x0 == Vector::Zero(2));
  CHECK(evaluate_q(p, vec({1, 0})) == doctest::Approx(0.295).epsilon(1e-15));

  CHECK(problems::l0_support_value(vec({1, 0.3}), 0.25, vec({1, 0})) ==
        doctest::Approx(0.295).epsilon(1e-15));
  CHECK(problems::l0_support_value(vec({1, 0.3}), 0.25, vec({0.5, 0.3})) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(problems::l0_support_value(vec({1, 0.3}), 0.25, Vector::Zero(2)) ==
        doctest::Approx(0.545).epsilon(1e-15));

  ProblemSpec seeded;
  seeded.kind = ProblemKind::l0quad;
  seeded.cols = 4;
  CHECK(problems::l0_center(seeded) == problems::l0_center(seeded));
  CHECK(problems::l0_center(seeded).size() == 4);

  CHECK_THROWS_AS(problems::make_l0_quadratic(l0_spec(std::vector<double>(13, 1.0), 0.1)),
                  ContractViolation);
  ProblemSpec mismatch = l0_spec({1, 2}, 0.1);
  mismatch.cols = 3;
  CHECK_THROWS_AS(problems::make_l0_quadratic(mismatch), ContractViolation);
}

TEST_CASE("box rosenbrock") {
  const auto p = problems::make_box_rosenbrock();
  CHECK(evaluate_q(p, vec({1, 1})) == 0.0);
  CHECK(evaluate_q(p, vec({3, 0})) == kInfinity);
  CHECK(evaluate_q(p, vec({-1.2, 1})) == doctest::Approx(24.2).epsilon(1e-14));
  CHECK(p.x0 == vec({-1.2, 1}));
  REQUIRE(p.known_optimum.has_value());
  CHECK(*p.known_optimum == 0.0);
  CHECK(gradient_consistency(p.smooth, p.x0) <= 1e-6);
  CHECK(p.smooth.gradient(vec({1, 1})).norm() == 0.0);
}

TEST_CASE("every problem passes the assumption checks") {
  ProblemSpec quartic;
  quartic.kind = ProblemKind::quartic;
  quartic.seed = 7;
  ProblemSpec l0 = l0_spec({1, 0.3}, 0.25);
  ProblemSpec rosen;
  rosen.kind = ProblemKind::box_rosenbrock;
  for (const auto& spec : {ProblemSpec{}, quartic, l0, rosen}) {
    CAPTURE(problems::to_string(spec.kind));
    const auto report = problems::check_assumptions(problems::make_problem(spec));
    CHECK(report.q0_finite);
    CHECK(report.regularizer_nonnegative);
    CHECK(report.ok(1e-5));
  }
}

TEST_CASE("problem kind names") {
  for (auto k : {ProblemKind::lasso, ProblemKind::quartic, ProblemKind::l0quad,
                 ProblemKind::box_rosenbrock}) {
    CHECK(problems::parse_problem_kind(problems::to_string(k)) == k);
  }
  CHECK_THROWS_AS(problems::parse_problem_kind("svm"), ContractViolation);
  ProblemSpec bad;
  bad.rows = 0;
  CHECK_THROWS_AS(problems::make_lasso(bad), ContractViolation);
}
