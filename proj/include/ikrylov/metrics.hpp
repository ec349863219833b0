#pragma once

#include "ikrylov/dense_core.hpp"
#include "ikrylov/problems.hpp"

namespace ikrylov {

/// Ground-truth quality of a solve, relative to |q*|:
///   r_res_gap: squared dual-norm gap between true and recurred residual,
///   r_sol_err: (q(x) - q*)/|q*|,
///   r_val_err: |q(x) - q_recurred|/|q*|.
struct EvalResult {
  double r_res_gap = 0.0;
  double r_sol_err = 0.0;
  double r_val_err = 0.0;
};

/// r(x) = A x - b at full working precision.
Vector true_residual(const QuadraticProblem& problem, const Vector& x);

/// q(x) evaluated with an exact product, never from recurred quantities.
double quadratic_value(const QuadraticProblem& problem, const Vector& x);

EvalResult evaluate(const QuadraticProblem& problem, const Vector& x,
                    const Vector& r_recurred, double q_recurred);

}  // namespace ikrylov
