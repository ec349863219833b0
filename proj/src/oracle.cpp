#include "ikrylov/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "ikrylov/errors.hpp"

namespace ikrylov {

namespace {

void check_request(const AccuracyRequest& req) {
  if (!(req.omega >= 0.0) || req.omega > 1.0) {
    throw OutOfRange("AccuracyRequest: omega must lie in [0, 1]");
  }
}

Vector random_unit_direction(std::size_t n, Rng& rng) {
  Vector u(n);
  double s;
  do {
    for (std::size_t i = 0; i < n; ++i) u[i] = rng.normal();
    s = norm2(u);
  } while (s == 0.0);
  for (std::size_t i = 0; i < n; ++i) u[i] /= s;
  return u;
}

/// Injects e = eta * u with eta saturating the granted bound in the
/// requested norm. The implied rank-one E = e p^T / ||p||_2^2 then attains
/// ||E||_2 = omega_hat * lambda_min (TwoNormRelative) or
/// ||E p||_{A^{-1}} = omega_hat ||p||_A (PrimalDual).
ProductOutcome inject(const SymMatrix& a, const SpectralEstimates& est,
                      const CholeskyFactor* chol, Rng& rng, const Vector& p,
                      const AccuracyRequest& req, double omega_hat,
                      double cost, bool zero_injection) {
  double pnorm = norm2(p);
  if (pnorm == 0.0) throw ZeroDirection("inexact product: p = 0");
  ProductOutcome out;
  out.product = a.multiply(p);
  out.omega_hat = omega_hat;
  out.cost = cost;
  if (zero_injection || req.omega == 0.0) {
    out.injected_error = Vector(p.size());
    return out;
  }
  Vector u = random_unit_direction(p.size(), rng);
  double eta;
  if (req.norm_mode == NormMode::TwoNormRelative) {
    eta = omega_hat * est.lambda_min_est * pnorm;
  } else {
    if (chol == nullptr) {
      throw ConfigError("PrimalDual accuracy requires the Cholesky factor");
    }
    eta = omega_hat * energy_norm(a, p) / dual_norm(*chol, u);
  }
  out.injected_error = scaled(u, eta);
  axpy(1.0, out.injected_error, out.product);
  return out;
}

}  // namespace

const std::array<PrecisionLevel, 3>& precision_levels() {
  static const std::array<PrecisionLevel, 3> levels = {{
      {PrecisionLevel::Name::Double, kEpsM, 1.0},
      {PrecisionLevel::Name::Single, std::sqrt(kEpsM), 0.25},
      {PrecisionLevel::Name::Half, std::sqrt(std::sqrt(kEpsM)), 0.0625},
  }};
  return levels;
}

double cost_continuous(double omega_hat) {
  if (!(omega_hat >= kEpsM) || omega_hat > 1.0) {
    throw OutOfRange("cost_continuous: omega_hat outside [eps_M, 1]");
  }
  return std::min(1.0, std::log(omega_hat) / std::log(kEpsM));
}

ProductOutcome ExactOracle::compute(const Vector& p,
                                    const AccuracyRequest& req) {
  check_request(req);
  if (p.size() != a_->order()) {
    throw DimensionMismatch("ExactOracle: length mismatch");
  }
  ProductOutcome out;
  out.product = a_->multiply(p);
  out.omega_hat = kEpsM;
  out.injected_error = Vector(p.size());
  out.cost = 1.0;
  return out;
}

ProductOutcome ContinuousOracle::compute(const Vector& p,
                                         const AccuracyRequest& req) {
  check_request(req);
  if (p.size() != a_->order()) {
    throw DimensionMismatch("ContinuousOracle: length mismatch");
  }
  double omega_hat = std::max(req.omega, kEpsM);
  return inject(*a_, est_, chol_, rng_, p, req, omega_hat,
                cost_continuous(omega_hat), zero_injection_);
}

ProductOutcome MultiPrecisionOracle::compute(const Vector& p,
                                             const AccuracyRequest& req) {
  check_request(req);
  if (p.size() != a_->order()) {
    throw DimensionMismatch("MultiPrecisionOracle: length mismatch");
  }
  // coarsest level whose accuracy still meets the request; double otherwise
  const auto& levels = precision_levels();
  const PrecisionLevel* chosen = &levels[0];
  for (const auto& level : levels) {
    if (level.accuracy <= req.omega) chosen = &level;
  }
  return inject(*a_, est_, chol_, rng_, p, req, chosen->accuracy,
                chosen->cost, false);
}

}  // namespace ikrylov
