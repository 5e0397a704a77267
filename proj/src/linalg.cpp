#include "unclab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace unclab {

namespace {

void require_finite(const Matrix& a, const char* what) {
  if (!a.all_finite()) throw InvalidInput(std::string(what) + ": non-finite entry");
}

void require_square(const Matrix& a, const char* what) {
  if (!a.square()) {
    throw DimensionError(std::string(what) + ": expected square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

// Unitary J that zeroes the (p,q) entry of the Hermitian 2x2
// [[app, apq], [conj(apq), aqq]] under J* (.) J.
struct Rotation {
  double c;
  double s;
  cplx phase;  // apq / |apq|
  double t;
};

Rotation jacobi_rotation(double app, double aqq, cplx apq) {
  const double mag = std::abs(apq);
  const double theta = (aqq - app) / (2.0 * mag);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  return {c, t * c, apq / mag, t};
}

// Columns p, q of m <- m * J with J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]].
void rotate_columns(Matrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  const cplx em = std::conj(r.phase);
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const cplx mp = m(k, p);
    const cplx mq = m(k, q);
    m(k, p) = r.c * mp - r.s * em * mq;
    m(k, q) = r.s * mp + r.c * em * mq;
  }
}

// Rows p, q of m <- J* m.
void rotate_rows(Matrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  const cplx ep = r.phase;
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const cplx mp = m(p, k);
    const cplx mq = m(q, k);
    m(p, k) = r.c * mp - r.s * ep * mq;
    m(q, k) = r.s * mp + r.c * ep * mq;
  }
}

double off_diagonal_norm(const Matrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) acc += std::norm(a(i, j));
  return std::sqrt(acc);
}

cplx column_dot(const Matrix& m, std::size_t p, std::size_t q) {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < m.rows(); ++k) acc += std::conj(m(k, p)) * m(k, q);
  return acc;
}

double column_norm2(const Matrix& m, std::size_t p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < m.rows(); ++k) acc += std::norm(m(k, p));
  return acc;
}

// Fill columns of `u` flagged in `missing` with an orthonormal completion.
void complete_orthonormal(Matrix& u, const std::vector<bool>& missing) {
  std::vector<std::size_t> have;
  for (std::size_t j = 0; j < u.cols(); ++j)
    if (!missing[j]) have.push_back(j);
  std::size_t basis = 0;
  for (std::size_t j = 0; j < u.cols(); ++j) {
    if (!missing[j]) continue;
    while (basis < u.rows()) {
      std::vector<cplx> v(u.rows(), 0.0);
      v[basis++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t h : have) {
          cplx d = 0.0;
          for (std::size_t k = 0; k < u.rows(); ++k) d += std::conj(u(k, h)) * v[k];
          for (std::size_t k = 0; k < u.rows(); ++k) v[k] -= d * u(k, h);
        }
      }
      double nrm = 0.0;
      for (const auto& z : v) nrm += std::norm(z);
      nrm = std::sqrt(nrm);
      if (nrm > 0.5) {
        for (std::size_t k = 0; k < u.rows(); ++k) u(k, j) = v[k] / nrm;
        have.push_back(j);
        break;
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("Matrix: data length " + std::to_string(data_.size()) +
                         " != " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::diagonal(std::span<const cplx> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Matrix Matrix::conj() const {
  Matrix m = *this;
  for (auto& z : m.data_) z = std::conj(z);
  return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                     std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("Matrix::block out of range");
  Matrix m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
    throw DimensionError("Matrix::set_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

void Matrix::add_block(std::size_t r0, std::size_t c0, const Matrix& b, cplx scale) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
    throw DimensionError("Matrix::add_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) += scale * b(i, j);
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("Matrix +=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("Matrix -=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, cplx s) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("Matrix *: inner dimensions " + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

double frobenius_norm(const Matrix& a) {
  double acc = 0.0;
  for (const auto& z : a.data()) acc += std::norm(z);
  return std::sqrt(acc);
}

double operator_norm(const Matrix& a) {
  if (a.empty()) return 0.0;
  return svd(a).s.front();
}

cplx trace(const Matrix& a) {
  require_square(a, "trace");
  cplx t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double hermitian_defect(const Matrix& a) {
  require_square(a, "hermitian_defect");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) acc += std::norm(a(i, j) - std::conj(a(j, i)));
  return std::sqrt(acc);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

Matrix hermitian_part(const Matrix& a) {
  require_square(a, "hermitian_part");
  Matrix h(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    h(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

// ---------------------------------------------------------------- eig

EigDecomposition herm_eig(const Matrix& input) {
  require_square(input, "herm_eig");
  require_finite(input, "herm_eig");
  const std::size_t n = input.rows();
  Matrix a = hermitian_part(input);
  Matrix q = Matrix::identity(n);

  const double scale = frobenius_norm(a);
  const double target = 1e-14 * scale;
  for (int sweep = 0; sweep < 64; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const cplx apq = a(p, r);
        if (std::abs(apq) <= 1e-300) continue;
        const Rotation rot = jacobi_rotation(a(p, p).real(), a(r, r).real(), apq);
        const double app = a(p, p).real() - rot.t * std::abs(apq);
        const double aqq = a(r, r).real() + rot.t * std::abs(apq);
        rotate_columns(a, p, r, rot);
        rotate_rows(a, p, r, rot);
        a(p, p) = app;
        a(r, r) = aqq;
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        rotate_columns(q, p, r, rot);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });
  EigDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = q(i, order[k]);
  }
  return out;
}

EigDecomposition herm_eig(const Matrix& a, const Matrix& warm_start) {
  require_square(a, "herm_eig");
  if (warm_start.rows() != a.rows() || warm_start.cols() != a.cols())
    throw DimensionError("herm_eig: warm start shape mismatch");
  EigDecomposition e = herm_eig(warm_start.adjoint() * a * warm_start);
  e.eigenvectors = warm_start * e.eigenvectors;
  return e;
}

double lambda_min(const Matrix& a) {
  if (a.empty()) return 0.0;
  return herm_eig(a).eigenvalues.front();
}

namespace {

Matrix spectral_map(const EigDecomposition& e, const std::vector<double>& f) {
  const Matrix& q = e.eigenvectors;
  const std::size_t n = q.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (f[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx qik = f[k] * q(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += qik * std::conj(q(j, k));
    }
  }
  return hermitian_part(out);
}

}  // namespace

Matrix psd_sqrt(const Matrix& a) {
  const EigDecomposition e = herm_eig(a);
  if (!e.eigenvalues.empty() && e.eigenvalues.front() < -1e-6) {
    throw NotPsdError("psd_sqrt: lambda_min = " + std::to_string(e.eigenvalues.front()));
  }
  std::vector<double> f(e.eigenvalues.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::sqrt(std::max(e.eigenvalues[k], 0.0));
  return spectral_map(e, f);
}

Matrix psd_project(const Matrix& a, double& input_lambda_min) {
  const EigDecomposition e = herm_eig(a);
  input_lambda_min = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.front();
  if (input_lambda_min >= 0.0) return hermitian_part(a);
  std::vector<double> f(e.eigenvalues.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::max(e.eigenvalues[k], 0.0);
  return spectral_map(e, f);
}

Matrix psd_project(const Matrix& a) {
  double unused;
  return psd_project(a, unused);
}

// ---------------------------------------------------------------- svd

Svd svd(const Matrix& input) {
  require_finite(input, "svd");
  if (input.rows() < input.cols()) {
    Svd t = svd(input.adjoint());
    return {std::move(t.v), std::move(t.s), std::move(t.u)};
  }
  const std::size_t m = input.rows();
  const std::size_t n = input.cols();
  Matrix w = input;
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = column_norm2(w, p);
        const double beta = column_norm2(w, q);
        const cplx gamma = column_dot(w, p, q);
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || std::abs(gamma) <= 1e-300)
          continue;
        rotated = true;
        const Rotation rot = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(w, p, q, rot);
        rotate_columns(v, p, q, rot);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = std::sqrt(column_norm2(w, j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });

  Svd out{Matrix(m, n), std::vector<double>(n), Matrix(n, n)};
  std::vector<bool> missing(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.s[k] = s[j];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, j);
    if (s[j] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, k) = w(i, j) / s[j];
    } else {
      missing[k] = true;
    }
  }
  if (std::find(missing.begin(), missing.end(), true) != missing.end())
    complete_orthonormal(out.u, missing);
  return out;
}

// ---------------------------------------------------------------- shuffle

Matrix canonical_shuffle(const Matrix& x, std::size_t outer, std::size_t inner) {
  if (!x.square() || x.rows() != outer * inner) {
    throw DimensionError("canonical_shuffle: expected " + std::to_string(outer * inner) +
                         " square, got " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()));
  }
  Matrix y(x.rows(), x.cols());
  for (std::size_t a = 0; a < outer; ++a)
    for (std::size_t b = 0; b < outer; ++b)
      for (std::size_t k = 0; k < inner; ++k)
        for (std::size_t l = 0; l < inner; ++l)
          y(k * outer + a, l * outer + b) = x(a * inner + k, b * inner + l);
  return y;
}

// ---------------------------------------------------------------- rng

std::uint64_t Rng::next_u64() {
  ++draws_;
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t Rng::derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master ^ (0xD1B54A32D192ED03ULL * (index + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix g(rows, cols);
  for (auto& z : g.data()) z = rng.complex_normal();
  return g;
}

Matrix random_hermitian(std::size_t d, Rng& rng) { return hermitian_part(ginibre(d, d, rng)); }

Matrix random_unitary(std::size_t d, Rng& rng) {
  if (d == 0) throw InvalidInput("random_unitary: dimension must be >= 1");
  Matrix q = ginibre(d, d, rng);
  // Gram-Schmidt with reorthogonalization. R has a positive real diagonal,
  // which is the phase normalization that makes Q Haar distributed.
  for (std::size_t j = 0; j < d; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const cplx r = column_dot(q, k, j);
        for (std::size_t i = 0; i < d; ++i) q(i, j) -= r * q(i, k);
      }
    }
    const double nrm = std::sqrt(column_norm2(q, j));
    for (std::size_t i = 0; i < d; ++i) q(i, j) /= nrm;
  }
  return q;
}

Matrix random_contraction(std::size_t n, std::size_t r, Rng& rng) {
  if (n == 0 || r == 0) throw InvalidInput("random_contraction: sizes must be >= 1");
  const std::size_t d = n * r;
  Matrix g = ginibre(d, d, rng);
  g *= 1.0 / std::sqrt(static_cast<double>(d));
  const bool boundary = rng.uniform() < 0.5;
  Svd f = svd(g);
  if (boundary) {
    if (f.s.front() > 0.0) g *= 1.0 / f.s.front();
    return g;
  }
  for (auto& s : f.s) s = std::min(s, 1.0);
  return f.u * Matrix::diagonal(std::span<const double>(f.s)) * f.v.adjoint();
}

std::vector<cplx> random_unit_vector(std::size_t d, Rng& rng) {
  if (d == 0) throw InvalidInput("random_unit_vector: dimension must be >= 1");
  std::vector<cplx> v(d);
  double nrm = 0.0;
  for (auto& z : v) {
    z = rng.complex_normal();
    nrm += std::norm(z);
  }
  nrm = std::sqrt(nrm);
  for (auto& z : v) z /= nrm;
  return v;
}

}  // namespace unclab
