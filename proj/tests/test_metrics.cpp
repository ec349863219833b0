#include "ikrylov/metrics.hpp"

#include <cmath>

#include "doctest.h"
#include "ikrylov/errors.hpp"

using namespace ikrylov;

namespace {

const QuadraticProblem& test_problem() {
  static QuadraticProblem p = gen_synthetic({10, 1e2, 1.0}, 2);
  return p;
}

Vector random_vector(std::size_t n, Rng& rng) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace

TEST_CASE("true_residual") {
  const QuadraticProblem& p = test_problem();
  CHECK(norm2(true_residual(p, p.x_star)) <= 1e-10 * norm2(p.b));
  Vector at_zero = true_residual(p, Vector(10));
  axpy(1.0, p.b, at_zero);
  CHECK(norm2(at_zero) == 0.0);
}

TEST_CASE("residual is affine: r(x+y) - r(x) = A y") {
  const QuadraticProblem& p = test_problem();
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x = random_vector(10, rng);
    Vector y = random_vector(10, rng);
    Vector xy = x;
    axpy(1.0, y, xy);
    Vector lhs = subtract(true_residual(p, xy), true_residual(p, x));
    axpy(-1.0, p.a.multiply(y), lhs);
    CHECK(norm2(lhs) <= 1e-12 * (norm2(x) + norm2(y)));
  }
}

TEST_CASE("evaluate at the minimizer") {
  const QuadraticProblem& p = test_problem();
  EvalResult r = evaluate(p, p.x_star, Vector(10), p.q_star);
  CHECK(std::abs(r.r_res_gap) <= 1e-12);
  CHECK(std::abs(r.r_sol_err) <= 1e-10);
  CHECK(r.r_val_err <= 1e-10);
}

TEST_CASE("evaluate at the starting point") {
  const QuadraticProblem& p = test_problem();
  EvalResult r = evaluate(p, Vector(10), scaled(p.b, -1.0), 0.0);
  CHECK(r.r_res_gap <= 1e-14);
  CHECK(r.r_sol_err == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gap vanishes whenever the recurred residual is the true one") {
  const QuadraticProblem& p = test_problem();
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x = random_vector(10, rng);
    EvalResult r = evaluate(p, x, true_residual(p, x), quadratic_value(p, x));
    CHECK(r.r_res_gap <= 1e-12);
    CHECK(r.r_val_err <= 1e-12);
    CHECK(r.r_sol_err >= -1e-12);  // convexity
  }
}

TEST_CASE("objective-gap identity holds on random points") {
  const QuadraticProblem& p = test_problem();
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    Vector x = random_vector(10, rng);
    double gap_dual = dual_norm(p.chol, true_residual(p, x));
    double lhs = 0.5 * gap_dual * gap_dual;
    double rhs = quadratic_value(p, x) - p.q_star;
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(p.q_star));
  }
}

TEST_CASE("evaluate validates dimensions") {
  const QuadraticProblem& p = test_problem();
  CHECK_THROWS_AS(evaluate(p, Vector(4), Vector(4), 0.0), DimensionMismatch);
}
