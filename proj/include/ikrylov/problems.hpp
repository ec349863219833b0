#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ikrylov/dense_core.hpp"

namespace ikrylov {

/// A convex quadratic q(x) = 1/2 x^T A x - b^T x packaged with its ground
/// truth: Cholesky factor, minimizer x* and optimal value q* < 0.
struct QuadraticProblem {
  SymMatrix a;
  Vector b;
  CholeskyFactor chol;
  Vector x_star;
  double q_star = 0.0;
  SpectralEstimates spectral_true;
};

/// Log-equidistant spectrum description: eigenvalues spaced evenly in
/// log10 between lambda_max/kappa and lambda_max.
struct SpectrumSpec {
  std::size_t n = 0;
  double kappa = 1.0;
  double lambda_max = 1.0;
};

/// The eigenvalue grid itself, largest first.
std::vector<double> log_equidistant_spectrum(const SpectrumSpec& spec);

/// Random symmetric matrix with the prescribed spectrum and a random
/// normalized right-hand side; deterministic per seed.
QuadraticProblem gen_synthetic(const SpectrumSpec& spec, std::uint64_t seed);

/// Assembles a problem around an existing SPD matrix: random Gaussian b
/// normalized to ||b||_2 = 1 (seeded), reference solution via Cholesky.
/// Spectral estimates default to deterministic factorization-based bounds
/// (lambda_max <= ||A||_F, lambda_min >= 1/||A^{-1}||_F) and can be
/// overridden by callers that know better values.
QuadraticProblem make_problem(SymMatrix a, std::uint64_t rhs_seed);
QuadraticProblem make_problem(SymMatrix a, std::uint64_t rhs_seed,
                              const SpectralEstimates& est);

struct MatrixMarketInfo {
  std::size_t declared_rows = 0;
  std::size_t declared_cols = 0;
  std::size_t declared_entries = 0;  // nnz for coordinate, values for array
  bool coordinate = true;
};

SymMatrix parse_matrix_market(const std::string& path);
SymMatrix parse_matrix_market(const std::string& path, MatrixMarketInfo& info);

/// One multiplicative up-or-down step: value*(1+u) or value/(1+u).
double apply_relative_perturbation(double value, double u, bool multiply);

/// Perturbs lambda_min/lambda_max independently by a relative factor in
/// [1, 2], direction chosen by a fair coin; the pair is re-ordered if the
/// perturbation inverts it. Trace and n pass through. Deterministic per seed.
SpectralEstimates perturb_estimates(const SpectralEstimates& true_est,
                                    std::uint64_t seed);

}  // namespace ikrylov
