#include "ikrylov/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "ikrylov/errors.hpp"

namespace ikrylov {

namespace {

void validate_spectrum_spec(const SpectrumSpec& spec) {
  if (spec.n < 2) throw InvalidSpec("SpectrumSpec: n must be >= 2");
  if (!(spec.kappa >= 1.0)) throw InvalidSpec("SpectrumSpec: kappa must be >= 1");
  if (spec.kappa >= 1e15) {
    throw InvalidSpec("SpectrumSpec: kappa too large for a factorizable matrix");
  }
  if (!(spec.lambda_max > 0.0)) {
    throw InvalidSpec("SpectrumSpec: lambda_max must be positive");
  }
}

Vector random_unit_rhs(std::size_t n, Rng& rng) {
  Vector b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = rng.normal();
  double bn = norm2(b);
  if (bn == 0.0) throw InvalidSpec("degenerate zero right-hand side draw");
  for (std::size_t i = 0; i < n; ++i) b[i] /= bn;
  return b;
}

QuadraticProblem finish_problem(SymMatrix a, Vector b, SpectralEstimates est) {
  QuadraticProblem p;
  p.chol = cholesky(a);
  p.x_star = p.chol.solve(b);
  p.q_star = -0.5 * dot(b, p.x_star);
  p.a = std::move(a);
  p.b = std::move(b);
  p.spectral_true = est;
  return p;
}

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double parse_real(const std::string& token, const std::string& path) {
  const char* begin = token.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw MalformedFile(path + ": bad numeric token '" + token + "'");
  }
  return value;
}

}  // namespace

std::vector<double> log_equidistant_spectrum(const SpectrumSpec& spec) {
  validate_spectrum_spec(spec);
  std::vector<double> lambda(spec.n);
  const double step = std::log10(spec.kappa) / static_cast<double>(spec.n - 1);
  for (std::size_t i = 0; i < spec.n; ++i) {
    lambda[i] = spec.lambda_max * std::pow(10.0, -static_cast<double>(i) * step);
  }
  return lambda;
}

QuadraticProblem gen_synthetic(const SpectrumSpec& spec, std::uint64_t seed) {
  std::vector<double> lambda = log_equidistant_spectrum(spec);
  const std::size_t n = spec.n;
  Rng rng(seed);
  DenseMatrix q = random_orthogonal(n, rng);
  Vector b = random_unit_rhs(n, rng);

  // A = Q diag(lambda) Q^T, lower triangle computed then mirrored
  DenseMatrix scaled_q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) scaled_q(i, k) = q(i, k) * lambda[k];
  }
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += scaled_q(i, k) * q(j, k);
      a.set(i, j, s);
    }
  }

  SpectralEstimates est;
  est.lambda_max_est = spec.lambda_max;
  est.lambda_min_est = spec.lambda_max / spec.kappa;
  est.trace = 0.0;
  for (double l : lambda) est.trace += l;
  est.n = n;
  return finish_problem(std::move(a), std::move(b), est);
}

QuadraticProblem make_problem(SymMatrix a, std::uint64_t rhs_seed,
                              const SpectralEstimates& est) {
  Rng rng(rhs_seed);
  Vector b = random_unit_rhs(a.order(), rng);
  return finish_problem(std::move(a), std::move(b), est);
}

QuadraticProblem make_problem(SymMatrix a, std::uint64_t rhs_seed) {
  // Factorization-based bounds: lambda_max <= ||A||_F and
  // lambda_min = 1/||A^{-1}||_2 >= 1/||A^{-1}||_F. Both are within a factor
  // sqrt(n) of the true extremes and err on the conservative side.
  CholeskyFactor chol = cholesky(a);
  const std::size_t n = a.order();
  double inv_frob_sq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Vector e(n);
    e[j] = 1.0;
    Vector col = chol.solve(e);
    inv_frob_sq += dot(col, col);
  }
  SpectralEstimates est;
  est.lambda_max_est = a.frobenius_norm();
  est.lambda_min_est = 1.0 / std::sqrt(inv_frob_sq);
  est.trace = a.trace();
  est.n = n;
  return make_problem(std::move(a), rhs_seed, est);
}

SymMatrix parse_matrix_market(const std::string& path, MatrixMarketInfo& info) {
  std::ifstream in(path);
  if (!in) throw MalformedFile(path + ": cannot open file");

  std::string banner;
  if (!std::getline(in, banner)) throw MalformedFile(path + ": empty file");
  std::istringstream bs(banner);
  std::string tag, object, format, field, symmetry;
  bs >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lowercase(object) != "matrix") {
    throw MalformedFile(path + ": missing %%MatrixMarket matrix banner");
  }
  format = lowercase(format);
  field = lowercase(field);
  symmetry = lowercase(symmetry);
  if (format != "coordinate" && format != "array") {
    throw UnsupportedFormat(path + ": format '" + format + "'");
  }
  if (field != "real" && field != "integer") {
    throw UnsupportedFormat(path + ": field '" + field + "'");
  }
  if (symmetry != "symmetric" && symmetry != "general") {
    throw UnsupportedFormat(path + ": symmetry '" + symmetry + "'");
  }
  const bool symmetric = symmetry == "symmetric";
  info.coordinate = format == "coordinate";

  auto next_data_line = [&](std::string& line) -> bool {
    while (std::getline(in, line)) {
      std::size_t pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos) continue;  // blank
      if (line[pos] == '%') continue;          // comment
      return true;
    }
    return false;
  };

  std::string line;
  if (!next_data_line(line)) throw MalformedFile(path + ": missing size line");
  std::istringstream sz(line);
  long long rows = -1, cols = -1, nnz = -1;
  if (info.coordinate) {
    if (!(sz >> rows >> cols >> nnz) || rows < 1 || cols < 1 || nnz < 0) {
      throw MalformedFile(path + ": bad coordinate size line");
    }
  } else {
    if (!(sz >> rows >> cols) || rows < 1 || cols < 1) {
      throw MalformedFile(path + ": bad array size line");
    }
  }
  if (rows != cols) throw NotSymmetric(path + ": matrix is not square");
  const std::size_t n = static_cast<std::size_t>(rows);
  info.declared_rows = n;
  info.declared_cols = static_cast<std::size_t>(cols);

  SymMatrix a(n);
  DenseMatrix general;  // staged entries when symmetry must be verified
  if (!symmetric) general = DenseMatrix(n, n);

  if (info.coordinate) {
    info.declared_entries = static_cast<std::size_t>(nnz);
    for (long long e = 0; e < nnz; ++e) {
      if (!next_data_line(line)) {
        throw MalformedFile(path + ": fewer entries than declared");
      }
      std::istringstream es(line);
      long long i = 0, j = 0;
      std::string vtok;
      if (!(es >> i >> j >> vtok)) {
        throw MalformedFile(path + ": bad entry line '" + line + "'");
      }
      if (i < 1 || j < 1 || i > rows || j > cols) {
        throw MalformedFile(path + ": index out of range");
      }
      double v = parse_real(vtok, path);
      std::size_t r = static_cast<std::size_t>(i - 1);
      std::size_t c = static_cast<std::size_t>(j - 1);
      if (symmetric) {
        a.add(r, c, v);  // fills both triangles, duplicates summed
      } else {
        general(r, c) += v;
      }
    }
    if (next_data_line(line)) {
      throw MalformedFile(path + ": more entries than declared");
    }
  } else {
    // array format: symmetric stores the lower triangle column by column,
    // general stores the full matrix column-major
    std::vector<double> values;
    const std::size_t expected =
        symmetric ? n * (n + 1) / 2 : n * static_cast<std::size_t>(cols);
    info.declared_entries = expected;
    while (next_data_line(line)) {
      std::istringstream es(line);
      std::string vtok;
      while (es >> vtok) values.push_back(parse_real(vtok, path));
    }
    if (values.size() != expected) {
      throw MalformedFile(path + ": array value count mismatch");
    }
    std::size_t idx = 0;
    if (symmetric) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = j; i < n; ++i) a.set(i, j, values[idx++]);
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) general(i, j) = values[idx++];
      }
    }
  }

  if (!symmetric) {
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        scale = std::max(scale, std::abs(general(i, j)));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (std::abs(general(i, j) - general(j, i)) > 1e-12 * scale) {
          throw NotSymmetric(path + ": general matrix is not symmetric");
        }
      }
    }
    a = SymMatrix::from_lower(general);
  }
  return a;
}

SymMatrix parse_matrix_market(const std::string& path) {
  MatrixMarketInfo info;
  return parse_matrix_market(path, info);
}

double apply_relative_perturbation(double value, double u, bool multiply) {
  return multiply ? value * (1.0 + u) : value / (1.0 + u);
}

SpectralEstimates perturb_estimates(const SpectralEstimates& true_est,
                                    std::uint64_t seed) {
  Rng rng(seed);
  SpectralEstimates out = true_est;
  double u_min = rng.uniform();
  bool up_min = rng.uniform() < 0.5;
  double u_max = rng.uniform();
  bool up_max = rng.uniform() < 0.5;
  out.lambda_min_est =
      apply_relative_perturbation(true_est.lambda_min_est, u_min, up_min);
  out.lambda_max_est =
      apply_relative_perturbation(true_est.lambda_max_est, u_max, up_max);
  if (out.lambda_min_est > out.lambda_max_est) {
    std::swap(out.lambda_min_est, out.lambda_max_est);
  }
  return out;
}

}  // namespace ikrylov
