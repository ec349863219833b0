#include "ikrylov/metrics.hpp"

#include <cmath>

#include "ikrylov/errors.hpp"

namespace ikrylov {

Vector true_residual(const QuadraticProblem& problem, const Vector& x) {
  Vector r = problem.a.multiply(x);
  axpy(-1.0, problem.b, r);
  return r;
}

double quadratic_value(const QuadraticProblem& problem, const Vector& x) {
  return 0.5 * dot(x, problem.a.multiply(x)) - dot(problem.b, x);
}

EvalResult evaluate(const QuadraticProblem& problem, const Vector& x,
                    const Vector& r_recurred, double q_recurred) {
  if (x.size() != problem.a.order() || r_recurred.size() != x.size()) {
    throw DimensionMismatch("evaluate: length mismatch");
  }
  const double q_abs = std::abs(problem.q_star);
  Vector gap = subtract(true_residual(problem, x), r_recurred);
  double gap_dual = dual_norm(problem.chol, gap);
  double qx = quadratic_value(problem, x);
  EvalResult out;
  out.r_res_gap = 0.5 * gap_dual * gap_dual / q_abs;
  out.r_sol_err = (qx - problem.q_star) / q_abs;
  out.r_val_err = std::abs(qx - q_recurred) / q_abs;
  return out;
}

}  // namespace ikrylov
