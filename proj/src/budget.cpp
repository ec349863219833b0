#include "ikrylov/budget.hpp"

#include <algorithm>
#include <cmath>

#include "ikrylov/errors.hpp"

namespace ikrylov {

int k_max_spectral(double eps, const SpectralEstimates& est) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw InvalidAccuracy("k_max_spectral: eps must lie in (0, 1)");
  }
  if (!(est.lambda_min_est > 0.0) ||
      est.lambda_max_est < est.lambda_min_est) {
    throw InvalidSpec("k_max_spectral: bad spectral estimates");
  }
  double kappa = est.lambda_max_est / est.lambda_min_est;
  if (kappa <= 1.0 + 1e-12) return 1;
  double sq = std::sqrt(kappa);
  double rho = (sq - 1.0) / (sq + 1.0);
  return static_cast<int>(std::ceil(std::log(eps) / std::log(rho)));
}

BudgetState budget_init(int k_max_user, int k_max_spec) {
  if (k_max_user < 1 || k_max_spec < 1) {
    throw InvalidSpec("budget_init: iteration caps must be >= 1");
  }
  BudgetState s;
  s.k_max = std::min(k_max_user, k_max_spec);
  s.phi_current = static_cast<double>(s.k_max);
  s.Phi_remaining = 1.0;
  s.iterations_used = 0;
  return s;
}

double phi_hat_fom(double eps_pi, double b_dual_norm_est, double omega_hat,
                   double v_a_norm_est, double h_inv_norm_est,
                   double r_prev_2norm) {
  if (r_prev_2norm == 0.0) throw DegenerateResidual("phi_hat_fom: r = 0");
  return eps_pi * b_dual_norm_est /
         (omega_hat * v_a_norm_est * h_inv_norm_est * r_prev_2norm);
}

double phi_hat_cg(double eps_pi, double b_dual_norm_est, double omega_hat,
                  double p_a_norm_est, double r_2norm) {
  if (r_2norm == 0.0) throw DegenerateResidual("phi_hat_cg: r = 0");
  return (1.0 - omega_hat) * eps_pi * b_dual_norm_est * p_a_norm_est /
         (omega_hat * r_2norm * r_2norm);
}

BudgetState budget_update(const BudgetState& state, double phi_hat) {
  BudgetState s = state;
  s.Phi_remaining -= 1.0 / phi_hat;
  s.iterations_used += 1;
  if (s.iterations_used < s.k_max && s.Phi_remaining > 0.0) {
    s.phi_current =
        static_cast<double>(s.k_max - s.iterations_used) / s.Phi_remaining;
  }
  // otherwise phi stays frozen; late iterations run at fixed accuracy
  return s;
}

}  // namespace ikrylov
