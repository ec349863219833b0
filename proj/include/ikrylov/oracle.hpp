#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ikrylov/dense_core.hpp"
#include "ikrylov/rng.hpp"

namespace ikrylov {

/// How an accuracy bound omega is to be read:
///   TwoNormRelative: ||E||_2 / lambda_min <= omega (computable estimates),
///   PrimalDual:      ||E p||_{A^{-1}} <= omega ||p||_A (diagnostic norms).
enum class NormMode { TwoNormRelative, PrimalDual };

struct AccuracyRequest {
  double omega = 0.0;  // in [0, 1]
  NormMode norm_mode = NormMode::TwoNormRelative;
};

/// The oracle's reply: perturbed product (A+E)p, the granted bound
/// omega_hat, the injected error vector E p kept for audits, and the charge
/// in equivalent full-accuracy products.
struct ProductOutcome {
  Vector product;
  double omega_hat = 0.0;
  Vector injected_error;
  double cost = 0.0;
};

struct PrecisionLevel {
  enum class Name { Double, Single, Half };
  Name name;
  double accuracy;
  double cost;
};

/// Double, single, half simulation levels: accuracies eps_M, eps_M^1/2,
/// eps_M^1/4 at costs 1, 1/4, 1/16.
const std::array<PrecisionLevel, 3>& precision_levels();

/// Running cost account; one entry per product.
class CostLedger {
 public:
  void charge(double cost) {
    per_iteration_.push_back(cost);
    total_ += cost;
  }
  double total() const { return total_; }
  const std::vector<double>& per_iteration() const { return per_iteration_; }

 private:
  double total_ = 0.0;
  std::vector<double> per_iteration_;
};

/// Cost of a continuous-accuracy product, normalized so that a full
/// machine-accuracy product costs 1: log(omega_hat)/log(eps_M) in [0,1].
double cost_continuous(double omega_hat);

/// Matrix-vector product provider bound to one solve. Not shareable across
/// threads; independent instances are independent streams.
class ProductOracle {
 public:
  virtual ~ProductOracle() = default;

  ProductOutcome operator()(const Vector& p, const AccuracyRequest& req) {
    ProductOutcome out = compute(p, req);
    ledger_.charge(out.cost);
    return out;
  }

  const CostLedger& ledger() const { return ledger_; }

 protected:
  virtual ProductOutcome compute(const Vector& p,
                                 const AccuracyRequest& req) = 0;

 private:
  CostLedger ledger_;
};

/// Full-accuracy products, unit cost each.
class ExactOracle : public ProductOracle {
 public:
  explicit ExactOracle(const SymMatrix& a) : a_(&a) {}

 protected:
  ProductOutcome compute(const Vector& p, const AccuracyRequest& req) override;

 private:
  const SymMatrix* a_;
};

/// Continuously adjustable accuracy: grants omega_hat = max(omega, eps_M)
/// and injects a random-direction error that saturates the granted bound.
/// With zero_injection the error path is skipped entirely, which makes
/// trajectories bit-identical to exact products.
class ContinuousOracle : public ProductOracle {
 public:
  ContinuousOracle(const SymMatrix& a, const SpectralEstimates& est,
                   const CholeskyFactor* chol, std::uint64_t seed,
                   bool zero_injection = false)
      : a_(&a), est_(est), chol_(chol), rng_(seed),
        zero_injection_(zero_injection) {}

 protected:
  ProductOutcome compute(const Vector& p, const AccuracyRequest& req) override;

 private:
  const SymMatrix* a_;
  SpectralEstimates est_;
  const CholeskyFactor* chol_;  // required for PrimalDual requests
  Rng rng_;
  bool zero_injection_;
};

/// Accuracy restricted to the three precision levels: picks the coarsest
/// level at least as accurate as requested (double when none qualifies) and
/// charges that level's cost.
class MultiPrecisionOracle : public ProductOracle {
 public:
  MultiPrecisionOracle(const SymMatrix& a, const SpectralEstimates& est,
                       const CholeskyFactor* chol, std::uint64_t seed)
      : a_(&a), est_(est), chol_(chol), rng_(seed) {}

 protected:
  ProductOutcome compute(const Vector& p, const AccuracyRequest& req) override;

 private:
  const SymMatrix* a_;
  SpectralEstimates est_;
  const CholeskyFactor* chol_;
  Rng rng_;
};

}  // namespace ikrylov
