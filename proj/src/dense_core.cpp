#include "ikrylov/dense_core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ikrylov/errors.hpp"

namespace ikrylov {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DimensionMismatch(what);
}

void require_finite(const std::vector<double>& entries) {
  for (double e : entries) {
    if (!std::isfinite(e)) throw InvalidSpec("vector entry is not finite");
  }
}

}  // namespace

Vector::Vector(std::initializer_list<double> entries) : entries_(entries) {
  require_finite(entries_);
}

Vector Vector::of(std::vector<double> entries) {
  require_finite(entries);
  Vector v;
  v.entries_ = std::move(entries);
  return v;
}

double dot(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

void axpy(double alpha, const Vector& x, Vector& y) {
  require_same_size(x.size(), y.size(), "axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector scaled(const Vector& v, double alpha) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = alpha * v[i];
  return out;
}

Vector subtract(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "subtract: length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

SymMatrix::SymMatrix(std::size_t order) : n_(order), a_(order * order, 0.0) {
  if (order < 1) throw InvalidSpec("SymMatrix: order must be >= 1");
}

SymMatrix SymMatrix::from_lower(const DenseMatrix& full) {
  if (full.rows() != full.cols()) {
    throw DimensionMismatch("SymMatrix::from_lower: matrix not square");
  }
  SymMatrix s(full.rows());
  for (std::size_t i = 0; i < s.n_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) s.set(i, j, full(i, j));
  }
  return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
  a_[i * n_ + j] = value;
  a_[j * n_ + i] = value;
}

void SymMatrix::add(std::size_t i, std::size_t j, double value) {
  a_[i * n_ + j] += value;
  if (i != j) a_[j * n_ + i] += value;
}

Vector SymMatrix::multiply(const Vector& x) const {
  require_same_size(x.size(), n_, "SymMatrix::multiply: length mismatch");
  Vector y(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = a_.data() + i * n_;
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += a_[i * n_ + i];
  return t;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double e : a_) s += e * e;
  return std::sqrt(s);
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double e : a_) m = std::max(m, std::abs(e));
  return m;
}

void HessenbergMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i > j + 1) {
    throw InvalidSpec("HessenbergMatrix: write below first subdiagonal");
  }
  h_[i * n_ + j] = value;
}

CholeskyFactor cholesky(const SymMatrix& a) {
  const std::size_t n = a.order();
  CholeskyFactor f;
  f.n_ = n;
  f.l_.assign(n * n, 0.0);
  auto l = [&](std::size_t i, std::size_t j) -> double& {
    return f.l_[i * n + j];
  };
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) {
      throw NotPositiveDefinite("cholesky: non-positive pivot");
    }
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return f;
}

Vector CholeskyFactor::forward_solve(const Vector& v) const {
  require_same_size(v.size(), n_, "forward_solve: length mismatch");
  Vector y(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = v[i];
    for (std::size_t k = 0; k < i; ++k) s -= l_[i * n_ + k] * y[k];
    y[i] = s / l_[i * n_ + i];
  }
  return y;
}

Vector CholeskyFactor::solve(const Vector& b) const {
  Vector y = forward_solve(b);
  // back substitution with L^T
  for (std::size_t ip = n_; ip-- > 0;) {
    double s = y[ip];
    for (std::size_t k = ip + 1; k < n_; ++k) s -= l_[k * n_ + ip] * y[k];
    y[ip] = s / l_[ip * n_ + ip];
  }
  return y;
}

Vector solve_spd(const CholeskyFactor& l, const Vector& b) {
  return l.solve(b);
}

double dual_norm(const CholeskyFactor& l, const Vector& v) {
  return norm2(l.forward_solve(v));
}

double energy_norm(const SymMatrix& a, const Vector& v) {
  double q = dot(v, a.multiply(v));
  if (q < 0.0) {
    double scale = static_cast<double>(a.order()) * kEpsM *
                   a.frobenius_norm() * dot(v, v);
    if (q < -scale) {
      throw NegativeQuadraticForm("energy_norm: v^T A v < 0");
    }
    q = 0.0;
  }
  return std::sqrt(q);
}

Vector hessenberg_solve(const HessenbergMatrix& h, const Vector& rhs) {
  const std::size_t k = h.order();
  require_same_size(rhs.size(), k, "hessenberg_solve: length mismatch");
  // working copies; only rows j and j+1 can carry the pivot of column j
  std::vector<double> m(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i * k + j] = h(i, j);
  }
  Vector x = rhs;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    std::size_t piv = j;
    if (std::abs(m[(j + 1) * k + j]) > std::abs(m[j * k + j])) piv = j + 1;
    if (piv != j) {
      for (std::size_t c = j; c < k; ++c) std::swap(m[j * k + c], m[piv * k + c]);
      std::swap(x[j], x[piv]);
    }
    if (m[j * k + j] == 0.0) {
      throw SingularMatrix("hessenberg_solve: zero pivot");
    }
    double factor = m[(j + 1) * k + j] / m[j * k + j];
    if (factor != 0.0) {
      for (std::size_t c = j; c < k; ++c) {
        m[(j + 1) * k + c] -= factor * m[j * k + c];
      }
      x[j + 1] -= factor * x[j];
    }
  }
  if (m[(k - 1) * k + (k - 1)] == 0.0) {
    throw SingularMatrix("hessenberg_solve: zero pivot");
  }
  for (std::size_t ip = k; ip-- > 0;) {
    double s = x[ip];
    for (std::size_t c = ip + 1; c < k; ++c) s -= m[ip * k + c] * x[c];
    x[ip] = s / m[ip * k + ip];
  }
  return x;
}

DenseMatrix random_orthogonal(std::size_t n, Rng& rng) {
  if (n < 1) throw InvalidSpec("random_orthogonal: n must be >= 1");
  DenseMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) r(i, j) = rng.normal();
  }
  // Householder QR of r; reflectors kept column by column.
  std::vector<std::vector<double>> reflectors(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> v(n - j);
    double sq = 0.0;
    for (std::size_t i = j; i < n; ++i) {
      v[i - j] = r(i, j);
      sq += r(i, j) * r(i, j);
    }
    double alpha = -std::copysign(std::sqrt(sq), v[0]);
    v[0] -= alpha;
    double vnorm = 0.0;
    for (double e : v) vnorm += e * e;
    vnorm = std::sqrt(vnorm);
    if (vnorm > 0.0) {
      for (double& e : v) e /= vnorm;
      for (std::size_t c = j; c < n; ++c) {
        double proj = 0.0;
        for (std::size_t i = j; i < n; ++i) proj += v[i - j] * r(i, c);
        for (std::size_t i = j; i < n; ++i) r(i, c) -= 2.0 * proj * v[i - j];
      }
    }
    reflectors[j] = std::move(v);
  }
  DenseMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) q(i, i) = 1.0;
  for (std::size_t j = n; j-- > 0;) {
    const auto& v = reflectors[j];
    if (v.empty()) continue;
    for (std::size_t c = 0; c < n; ++c) {
      double proj = 0.0;
      for (std::size_t i = j; i < n; ++i) proj += v[i - j] * q(i, c);
      for (std::size_t i = j; i < n; ++i) q(i, c) -= 2.0 * proj * v[i - j];
    }
  }
  // fix signs so the R diagonal is positive, making Q unique given the draw
  for (std::size_t j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) q(i, j) = -q(i, j);
    }
  }
  return q;
}

DenseMatrix random_orthogonal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return random_orthogonal(n, rng);
}

}  // namespace ikrylov
