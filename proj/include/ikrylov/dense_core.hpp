#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "ikrylov/rng.hpp"

namespace ikrylov {

/// binary64 unit roundoff (2^-53).
inline constexpr double kEpsM = 1.1102230246251565e-16;

/// Dense real vector. Construction from external data rejects NaN/Inf
/// entries; in-place arithmetic on an already valid vector is unchecked.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double value = 0.0) : entries_(n, value) {}
  Vector(std::initializer_list<double> entries);
  static Vector of(std::vector<double> entries);

  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  double& operator[](std::size_t i) { return entries_[i]; }
  const double* data() const { return entries_.data(); }
  double* data() { return entries_.data(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> entries_;
};

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
/// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);
Vector scaled(const Vector& v, double alpha);
Vector subtract(const Vector& a, const Vector& b);

/// Dense rectangular matrix, row-major.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Dense symmetric matrix. Full square storage, but writes keep both
/// triangles in sync so entries(i,j) == entries(j,i) always holds; the lower
/// triangle is authoritative when building from unsymmetric data.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t order);

  /// Symmetrizes by copying the lower triangle of `full` onto both sides.
  static SymMatrix from_lower(const DenseMatrix& full);

  std::size_t order() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * n_ + j];
  }
  void set(std::size_t i, std::size_t j, double value);
  void add(std::size_t i, std::size_t j, double value);

  Vector multiply(const Vector& x) const;
  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  bool operator==(const SymMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// Lower-triangular Cholesky factor L with L L^T equal to the factored
/// matrix. Diagonal strictly positive.
class CholeskyFactor {
 public:
  std::size_t order() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return j <= i ? l_[i * n_ + j] : 0.0;
  }

  /// Solves L y = v.
  Vector forward_solve(const Vector& v) const;
  /// Solves L L^T x = b.
  Vector solve(const Vector& b) const;

 private:
  friend CholeskyFactor cholesky(const SymMatrix& a);
  std::size_t n_ = 0;
  std::vector<double> l_;
};

/// Upper Hessenberg matrix of order k: h(i,j) = 0 for i > j+1 is structural
/// and cannot be written.
class HessenbergMatrix {
 public:
  HessenbergMatrix() = default;
  explicit HessenbergMatrix(std::size_t order)
      : n_(order), h_(order * order, 0.0) {}

  std::size_t order() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return h_[i * n_ + j];
  }
  void set(std::size_t i, std::size_t j, double value);

 private:
  std::size_t n_ = 0;
  std::vector<double> h_;
};

/// Extremal eigenvalue estimates plus the exactly known trace and order.
/// These are solver inputs; nothing in the library computes eigenvalues.
struct SpectralEstimates {
  double lambda_min_est = 0.0;
  double lambda_max_est = 0.0;
  double trace = 0.0;
  std::size_t n = 0;
};

CholeskyFactor cholesky(const SymMatrix& a);
Vector solve_spd(const CholeskyFactor& l, const Vector& b);
/// ||v||_{A^{-1}} = ||L^{-1} v||_2.
double dual_norm(const CholeskyFactor& l, const Vector& v);
/// ||v||_A = sqrt(v^T A v).
double energy_norm(const SymMatrix& a, const Vector& v);
/// Gaussian elimination with partial pivoting restricted to the Hessenberg
/// profile, O(k^2).
Vector hessenberg_solve(const HessenbergMatrix& h, const Vector& rhs);
/// Orthonormalizes a seeded standard-Gaussian matrix (Householder QR,
/// sign-fixed R diagonal). Deterministic per seed.
DenseMatrix random_orthogonal(std::size_t n, std::uint64_t seed);
DenseMatrix random_orthogonal(std::size_t n, Rng& rng);

}  // namespace ikrylov
