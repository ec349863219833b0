#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ikrylov/budget.hpp"
#include "ikrylov/dense_core.hpp"
#include "ikrylov/oracle.hpp"
#include "ikrylov/problems.hpp"

namespace ikrylov {

enum class SolveMode { Exact, Theoretical, Practical };
enum class Method { Fom, Cg };
enum class PhiPolicy { Managed, ConstantN };

/// Estimate of ||b||_{A^{-1}} used before any quadratic value exists:
/// either ||b||_2/sqrt(lambda_max) or the |q| -> ||b||_2 lambda_max
/// substitution.
enum class FirstIterEstimate { BNormOverSqrtLambdaMax, QFromBLambdaMax };

struct SolverConfig {
  double eps = 1e-3;           // target relative decrease of the quadratic
  int delay_d = 10;            // stabilization delay of the practical test
  int k_max_user = 0;          // 0 picks the default 3n
  SolveMode mode = SolveMode::Practical;
  Method method = Method::Cg;
  bool reorth = false;         // CG residual reorthogonalization
  PhiPolicy phi_policy = PhiPolicy::Managed;
  FirstIterEstimate first_iter_estimate =
      FirstIterEstimate::BNormOverSqrtLambdaMax;
  bool record_iterates = false;
  std::uint64_t seed = 0;

  double eps_pi() const;  // always 1/2 sqrt(eps)
};

enum class TerminationReason {
  DelayTest,
  DualNormTest,
  ResidualSmall,
  MaxIterations,
  Breakdown,
};

const char* to_string(TerminationReason reason);

struct IterationRecord {
  int k = 0;  // 1-based product count
  double omega_requested = 0.0;
  double omega_hat = 0.0;
  double cost = 0.0;
  double q_k = 0.0;
  double r_2norm = 0.0;
  double r_dual_norm = 0.0;
  double phi_k = 0.0;
};

/// Per-iteration snapshots kept only when record_iterates is set; the
/// residual-gap audit and the trajectory comparisons read these.
struct AuditTrace {
  std::vector<double> alphas;           // CG step lengths
  std::vector<Vector> injected_errors;  // E_j p_j as reported by the oracle
  std::vector<Vector> iterates;         // x_k
  std::vector<Vector> recurred_residuals;
  std::vector<Vector> basis;            // FOM Arnoldi vectors v_k
  std::vector<std::vector<double>> hessenberg_columns;  // incl. subdiagonal
};

struct SolveReport {
  Vector x_final;
  int n_it = 0;
  double total_cost = 0.0;
  TerminationReason termination_reason = TerminationReason::MaxIterations;
  std::vector<IterationRecord> trace;
  Vector r_recurred_final;
  double q_recurred_final = 0.0;
  double sum_inv_phi_hat = 0.0;
  int k_max = 0;  // budget cap in effect
  std::optional<AuditTrace> audit;
};

/// Product-accuracy bounds. The theoretical forms take dual/energy norms,
/// the practical forms the computable stand-ins.
double omega_fom_theoretical(double eps_pi, double b_dual, double v_a_norm,
                             double h_inv_est, double r_prev_2, double phi_j);
double omega_cg_theoretical(double eps_pi, double b_dual, double p_a_norm,
                            double r_2, double phi_next);
double omega_fom_practical(double eps_pi, double q_j_abs,
                           const SpectralEstimates& est, double r_prev_2,
                           double v_2, double phi_j);
double omega_cg_practical(double eps_pi, double q_j_abs,
                          const SpectralEstimates& est, double r_2,
                          double p_2, double phi_next);

SolveReport solve_fom(const QuadraticProblem& problem,
                      const SpectralEstimates& est, ProductOracle& oracle,
                      BudgetState budget, const SolverConfig& config);
SolveReport solve_cg(const QuadraticProblem& problem,
                     const SpectralEstimates& est, ProductOracle& oracle,
                     BudgetState budget, const SolverConfig& config);

/// Deviation from the residual-gap recurrence after k products:
/// (r(x_k) - r_k) + sum_j alpha_j e_j, which is rounding-level whenever the
/// recorded injections account for all product error.
Vector residual_gap_audit(const QuadraticProblem& problem,
                          const AuditTrace& audit, std::size_t k);

}  // namespace ikrylov
