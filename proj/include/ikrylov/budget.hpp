#pragma once

#include "ikrylov/dense_core.hpp"

namespace ikrylov {

/// Running inaccuracy-budget state: phi_current is the weight for the next
/// product, Phi_remaining the unspent fraction 1 - sum(1/phi_hat).
struct BudgetState {
  int k_max = 1;
  double phi_current = 1.0;
  double Phi_remaining = 1.0;
  int iterations_used = 0;
};

/// Expected iteration count from the spectral convergence factor
/// rho = (sqrt(kappa)-1)/(sqrt(kappa)+1): ceil(log(eps)/log(rho)).
int k_max_spectral(double eps, const SpectralEstimates& est);

BudgetState budget_init(int k_max_user, int k_max_spec);

/// Accounting weight actually consumed by a product granted omega_hat, from
/// the same quantities that produced the request.
double phi_hat_fom(double eps_pi, double b_dual_norm_est, double omega_hat,
                   double v_a_norm_est, double h_inv_norm_est,
                   double r_prev_2norm);
double phi_hat_cg(double eps_pi, double b_dual_norm_est, double omega_hat,
                  double p_a_norm_est, double r_2norm);

/// Spends 1/phi_hat and redistributes the remaining budget over the
/// remaining expected iterations; phi freezes once the iteration estimate or
/// the budget is exhausted.
BudgetState budget_update(const BudgetState& state, double phi_hat);

}  // namespace ikrylov
