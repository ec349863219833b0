#include "ikrylov/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "ikrylov/errors.hpp"

namespace ikrylov {

namespace {

void validate_config(const SolverConfig& config, Method expected) {
  if (!(config.eps > 0.0) || !(config.eps < 1.0)) {
    throw InvalidAccuracy("SolverConfig: eps must lie in (0, 1)");
  }
  if (config.delay_d < 1) {
    throw InvalidSpec("SolverConfig: delay must be >= 1");
  }
  if (config.method != expected) {
    throw ConfigError("SolverConfig: method does not match solver");
  }
}

int effective_k_max_user(const SolverConfig& config, std::size_t n) {
  return config.k_max_user > 0 ? config.k_max_user
                               : 3 * static_cast<int>(n);
}

/// |q| stand-in for the first product, where no quadratic value exists yet.
double first_iteration_q(const SolverConfig& config,
                         const SpectralEstimates& est, double b_2norm) {
  if (config.first_iter_estimate == FirstIterEstimate::QFromBLambdaMax) {
    return b_2norm * est.lambda_max_est;
  }
  // sqrt(2 q) == ||b||_2 / sqrt(lambda_max)
  return b_2norm * b_2norm / (2.0 * est.lambda_max_est);
}

struct DelayTestState {
  const std::vector<double>& q_hist;
  int d;
  double eps;

  // q_{j-d} - q_j <= 1/4 eps |q_j|, only once j > d
  bool fires(int j) const {
    if (j <= d) return false;
    double qj = q_hist[static_cast<std::size_t>(j)];
    return q_hist[static_cast<std::size_t>(j - d)] - qj <=
           0.25 * eps * std::abs(qj);
  }
};

SolveReport trivial_report(const QuadraticProblem& problem,
                           const SolverConfig& config, int k_max) {
  SolveReport report;
  report.x_final = Vector(problem.a.order());
  report.r_recurred_final = scaled(problem.b, -1.0);
  report.q_recurred_final = 0.0;
  report.termination_reason = TerminationReason::ResidualSmall;
  report.k_max = k_max;
  if (config.record_iterates) report.audit = AuditTrace{};
  return report;
}

}  // namespace

double SolverConfig::eps_pi() const { return 0.5 * std::sqrt(eps); }

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::DelayTest: return "delay";
    case TerminationReason::DualNormTest: return "dual_norm";
    case TerminationReason::ResidualSmall: return "residual_small";
    case TerminationReason::MaxIterations: return "max_iterations";
    case TerminationReason::Breakdown: return "breakdown";
  }
  return "unknown";
}

double omega_fom_theoretical(double eps_pi, double b_dual, double v_a_norm,
                             double h_inv_est, double r_prev_2, double phi_j) {
  if (r_prev_2 == 0.0) throw DegenerateResidual("omega_fom_theoretical: r = 0");
  return std::min(
      1.0, eps_pi * b_dual / (phi_j * v_a_norm * h_inv_est * r_prev_2));
}

double omega_cg_theoretical(double eps_pi, double b_dual, double p_a_norm,
                            double r_2, double phi_next) {
  if (r_2 == 0.0) throw DegenerateResidual("omega_cg_theoretical: r = 0");
  double num = eps_pi * b_dual * p_a_norm;
  return num / (phi_next * r_2 * r_2 + num);
}

double omega_fom_practical(double eps_pi, double q_j_abs,
                           const SpectralEstimates& est, double r_prev_2,
                           double v_2, double phi_j) {
  if (r_prev_2 == 0.0) throw DegenerateResidual("omega_fom_practical: r = 0");
  double num = eps_pi * std::sqrt(static_cast<double>(est.n)) *
               std::sqrt(2.0 * q_j_abs) * est.lambda_min_est;
  double den = phi_j * r_prev_2 * std::sqrt(est.trace) * v_2;
  return std::min(1.0, num / den);
}

double omega_cg_practical(double eps_pi, double q_j_abs,
                          const SpectralEstimates& est, double r_2, double p_2,
                          double phi_next) {
  if (r_2 == 0.0) throw DegenerateResidual("omega_cg_practical: r = 0");
  double num = eps_pi * std::sqrt(2.0 * q_j_abs) * std::sqrt(est.trace) * p_2;
  return num /
         (std::sqrt(static_cast<double>(est.n)) * phi_next * r_2 * r_2 + num);
}

SolveReport solve_fom(const QuadraticProblem& problem,
                      const SpectralEstimates& est, ProductOracle& oracle,
                      BudgetState budget, const SolverConfig& config) {
  validate_config(config, Method::Fom);
  const std::size_t n = problem.a.order();
  const int k_cap = effective_k_max_user(config, n);
  const double eps_pi = config.eps_pi();
  const double phi_constant = static_cast<double>(n);
  const bool managed =
      config.phi_policy == PhiPolicy::Managed && config.mode != SolveMode::Exact;
  const double b_dual_true = dual_norm(problem.chol, problem.b);
  const double lambda_min_true = problem.spectral_true.lambda_min_est;
  const NormMode norm_mode = config.mode == SolveMode::Theoretical
                                 ? NormMode::PrimalDual
                                 : NormMode::TwoNormRelative;

  SolveReport report;
  report.k_max = budget.k_max;
  if (config.record_iterates) report.audit = AuditTrace{};

  const double beta = norm2(problem.b);
  if (beta == 0.0) return trivial_report(problem, config, budget.k_max);

  std::vector<Vector> v;  // Arnoldi basis
  v.push_back(scaled(problem.b, 1.0 / beta));
  std::vector<double> z{beta};  // v_j^T b; v_1^T b is beta exactly
  std::vector<std::vector<double>> h_cols;      // column k: rows 1..k+1
  std::vector<double> q_hist{0.0};
  DelayTestState delay{q_hist, config.delay_d, config.eps};

  double r_prev_norm = beta;  // ||r_0||_2
  Vector y, r_rec;
  double q_k = 0.0;
  bool done = false;

  auto assemble_x = [&](const Vector& coeffs) {
    Vector x(n);
    for (std::size_t i = 0; i < coeffs.size(); ++i) axpy(coeffs[i], v[i], x);
    return x;
  };

  int k = 0;
  while (k < k_cap && !done) {
    ++k;
    if (r_prev_norm == 0.0) {
      --k;
      report.termination_reason = TerminationReason::ResidualSmall;
      done = true;
      break;
    }
    const std::size_t kk = static_cast<std::size_t>(k);
    const double phi_eff = config.phi_policy == PhiPolicy::ConstantN
                               ? phi_constant
                               : budget.phi_current;

    // quantities feeding both the request and the budget accounting
    double omega = 0.0;
    double v_a_norm = 0.0;   // theoretical
    double v_2norm = 0.0;    // practical
    double q_eff = 0.0;      // practical
    if (config.mode == SolveMode::Theoretical) {
      v_a_norm = energy_norm(problem.a, v[kk - 1]);
      omega = omega_fom_theoretical(eps_pi, b_dual_true, v_a_norm,
                                    1.0 / lambda_min_true, r_prev_norm,
                                    phi_eff);
    } else if (config.mode == SolveMode::Practical) {
      v_2norm = norm2(v[kk - 1]);
      q_eff = k == 1 ? first_iteration_q(config, est, beta)
                     : std::abs(q_hist[kk - 1]);
      omega = omega_fom_practical(eps_pi, q_eff, est, r_prev_norm, v_2norm,
                                  phi_eff);
    }

    ProductOutcome out = oracle(v[kk - 1], AccuracyRequest{omega, norm_mode});
    Vector w = out.product;
    const double w_norm_pre = norm2(w);

    std::vector<double> h_col;
    h_col.reserve(kk + 1);
    for (std::size_t i = 0; i < kk; ++i) {
      double hik = dot(v[i], w);
      h_col.push_back(hik);
      axpy(-hik, v[i], w);
    }
    const double h_sub = norm2(w);
    h_col.push_back(h_sub);
    h_cols.push_back(std::move(h_col));

    HessenbergMatrix hk(kk);
    for (std::size_t c = 0; c < kk; ++c) {
      const std::size_t top = std::min(c + 2, kk);
      for (std::size_t i = 0; i < top; ++i) hk.set(i, c, h_cols[c][i]);
    }
    Vector rhs(kk);
    rhs[0] = beta;
    y = hessenberg_solve(hk, rhs);

    q_k = 0.0;
    for (std::size_t i = 0; i < kk; ++i) q_k += z[i] * y[i];
    q_k *= -0.5;

    const double r_norm = std::abs(h_sub * y[kk - 1]);

    // recurred residual V_{k+1} Htilde_k y - b, with w standing in for
    // h_{k+1,k} v_{k+1}
    r_rec = scaled(problem.b, -1.0);
    for (std::size_t i = 0; i < kk; ++i) {
      double ti = 0.0;
      for (std::size_t c = (i == 0 ? 0 : i - 1); c < kk; ++c) {
        ti += h_cols[c][i] * y[c];
      }
      axpy(ti, v[i], r_rec);
    }
    axpy(y[kk - 1], w, r_rec);
    const double r_dual = dual_norm(problem.chol, r_rec);

    report.trace.push_back(IterationRecord{k, omega, out.omega_hat, out.cost,
                                           q_k, r_norm, r_dual, phi_eff});
    q_hist.push_back(q_k);
    if (report.audit) {
      report.audit->injected_errors.push_back(out.injected_error);
      report.audit->iterates.push_back(assemble_x(y));
      report.audit->recurred_residuals.push_back(r_rec);
      report.audit->basis.push_back(v[kk - 1]);
      report.audit->hessenberg_columns.push_back(h_cols.back());
    }

    const bool terminated = config.mode == SolveMode::Practical
                                ? delay.fires(k)
                                : r_dual <= eps_pi * b_dual_true;
    if (terminated) {
      report.termination_reason = config.mode == SolveMode::Practical
                                      ? TerminationReason::DelayTest
                                      : TerminationReason::DualNormTest;
      done = true;
      break;
    }

    if (managed) {
      double phi_hat;
      if (config.mode == SolveMode::Theoretical) {
        phi_hat = phi_hat_fom(eps_pi, b_dual_true, out.omega_hat, v_a_norm,
                              1.0 / lambda_min_true, r_prev_norm);
      } else {
        double v_a_est =
            std::sqrt(est.trace / static_cast<double>(est.n)) * v_2norm;
        phi_hat = phi_hat_fom(eps_pi, std::sqrt(2.0 * q_eff), out.omega_hat,
                              v_a_est, 1.0 / est.lambda_min_est, r_prev_norm);
      }
      report.sum_inv_phi_hat += 1.0 / phi_hat;
      budget = budget_update(budget, phi_hat);
    }

    if (h_sub <= static_cast<double>(n) * kEpsM * w_norm_pre) {
      // happy breakdown: the Krylov space is invariant, current y is final
      report.termination_reason = TerminationReason::Breakdown;
      done = true;
      break;
    }

    v.push_back(scaled(w, 1.0 / h_sub));
    z.push_back(dot(v.back(), problem.b));
    r_prev_norm = r_norm;
  }

  report.n_it = k;
  if (k == 0) {
    report.x_final = Vector(n);
    report.r_recurred_final = scaled(problem.b, -1.0);
    report.q_recurred_final = 0.0;
  } else {
    report.x_final = assemble_x(y);
    report.r_recurred_final = r_rec;
    report.q_recurred_final = q_k;
  }
  report.total_cost = 0.0;
  for (const auto& rec : report.trace) report.total_cost += rec.cost;
  return report;
}

SolveReport solve_cg(const QuadraticProblem& problem,
                     const SpectralEstimates& est, ProductOracle& oracle,
                     BudgetState budget, const SolverConfig& config) {
  validate_config(config, Method::Cg);
  const std::size_t n = problem.a.order();
  const int k_cap = effective_k_max_user(config, n);
  const double eps_pi = config.eps_pi();
  const double phi_constant = static_cast<double>(n);
  const bool managed =
      config.phi_policy == PhiPolicy::Managed && config.mode != SolveMode::Exact;
  const double b_dual_true = dual_norm(problem.chol, problem.b);
  const NormMode norm_mode = config.mode == SolveMode::Theoretical
                                 ? NormMode::PrimalDual
                                 : NormMode::TwoNormRelative;

  SolveReport report;
  report.k_max = budget.k_max;
  if (config.record_iterates) report.audit = AuditTrace{};

  const double beta0 = norm2(problem.b);
  if (beta0 == 0.0) return trivial_report(problem, config, budget.k_max);

  Vector x(n);
  Vector r = scaled(problem.b, -1.0);
  Vector p = problem.b;
  double beta = beta0;  // ||r_k||_2
  std::vector<double> q_hist{0.0};
  DelayTestState delay{q_hist, config.delay_d, config.eps};
  std::vector<Vector> residual_basis;
  if (config.reorth) residual_basis.push_back(scaled(problem.b, 1.0 / beta0));

  double q_next = 0.0;
  bool done = false;
  int products = 0;

  for (int k = 0; k < k_cap && !done; ++k) {
    const double phi_eff = config.phi_policy == PhiPolicy::ConstantN
                               ? phi_constant
                               : budget.phi_current;
    const double r_2 = beta;

    double omega = 0.0;
    double p_a_norm = 0.0;  // theoretical
    double p_2norm = 0.0;   // practical
    double q_eff = 0.0;     // practical
    if (config.mode == SolveMode::Theoretical) {
      p_a_norm = energy_norm(problem.a, p);
      omega = omega_cg_theoretical(eps_pi, b_dual_true, p_a_norm, r_2, phi_eff);
    } else if (config.mode == SolveMode::Practical) {
      p_2norm = norm2(p);
      q_eff = k == 0 ? first_iteration_q(config, est, beta0)
                     : std::abs(q_hist.back());
      omega = omega_cg_practical(eps_pi, q_eff, est, r_2, p_2norm, phi_eff);
    }

    ProductOutcome out = oracle(p, AccuracyRequest{omega, norm_mode});
    const Vector& c = out.product;
    const double pc = dot(p, c);
    if (pc <= 0.0) {
      throw IndefiniteCurvature("solve_cg: p^T (A+E) p <= 0");
    }
    const double alpha = beta * beta / pc;
    axpy(alpha, p, x);
    q_next = -0.5 * dot(problem.b, x);
    axpy(alpha, c, r);
    if (config.reorth) {
      for (const Vector& u : residual_basis) axpy(-dot(u, r), u, r);
    }
    const double beta_next = norm2(r);
    if (config.reorth && beta_next > 0.0) {
      residual_basis.push_back(scaled(r, 1.0 / beta_next));
    }
    products = k + 1;
    q_hist.push_back(q_next);
    const double r_dual = dual_norm(problem.chol, r);

    report.trace.push_back(IterationRecord{products, omega, out.omega_hat,
                                           out.cost, q_next, beta_next, r_dual,
                                           phi_eff});
    if (report.audit) {
      report.audit->alphas.push_back(alpha);
      report.audit->injected_errors.push_back(out.injected_error);
      report.audit->iterates.push_back(x);
      report.audit->recurred_residuals.push_back(r);
    }

    const bool terminated = config.mode == SolveMode::Practical
                                ? delay.fires(products)
                                : r_dual <= eps_pi * b_dual_true;
    if (terminated) {
      report.termination_reason = config.mode == SolveMode::Practical
                                      ? TerminationReason::DelayTest
                                      : TerminationReason::DualNormTest;
      done = true;
      break;
    }
    if (beta_next == 0.0) {
      report.termination_reason = TerminationReason::ResidualSmall;
      done = true;
      break;
    }

    if (managed) {
      double phi_hat;
      if (config.mode == SolveMode::Theoretical) {
        phi_hat = phi_hat_cg(eps_pi, b_dual_true, out.omega_hat, p_a_norm, r_2);
      } else {
        double p_a_est =
            std::sqrt(est.trace / static_cast<double>(est.n)) * p_2norm;
        phi_hat = phi_hat_cg(eps_pi, std::sqrt(2.0 * q_eff), out.omega_hat,
                             p_a_est, r_2);
      }
      report.sum_inv_phi_hat += 1.0 / phi_hat;
      budget = budget_update(budget, phi_hat);
    }

    const double ratio = beta_next / beta;
    const double s = ratio * ratio;
    for (std::size_t i = 0; i < n; ++i) p[i] = -r[i] + s * p[i];
    beta = beta_next;
  }

  report.n_it = products;
  report.x_final = x;
  report.r_recurred_final = r;
  report.q_recurred_final = q_next;
  report.total_cost = 0.0;
  for (const auto& rec : report.trace) report.total_cost += rec.cost;
  return report;
}

Vector residual_gap_audit(const QuadraticProblem& problem,
                          const AuditTrace& audit, std::size_t k) {
  if (k < 1 || k > audit.iterates.size() || k > audit.alphas.size()) {
    throw OutOfRange("residual_gap_audit: k outside the recorded trace");
  }
  const Vector& xk = audit.iterates[k - 1];
  Vector acc = problem.a.multiply(xk);
  axpy(-1.0, problem.b, acc);                          // r(x_k)
  axpy(-1.0, audit.recurred_residuals[k - 1], acc);    // - r_k
  for (std::size_t j = 0; j < k; ++j) {
    axpy(audit.alphas[j], audit.injected_errors[j], acc);
  }
  return acc;
}

}  // namespace ikrylov
