#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace unclab {

using cplx = std::complex<double>;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotPsdError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Dense row-major complex matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static Matrix diagonal(std::span<const double> d);
  static Matrix diagonal(std::span<const cplx> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conj() const;

  /// Rectangular sub-block starting at (r0, c0).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  void add_block(std::size_t r0, std::size_t c0, const Matrix& b, cplx scale = 1.0);

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(cplx s);

  bool operator==(const Matrix& o) const = default;

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(cplx s, Matrix a);
Matrix operator*(Matrix a, cplx s);

Matrix kron(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& a);
/// Largest singular value.
double operator_norm(const Matrix& a);
cplx trace(const Matrix& a);
/// ‖A − A*‖_F.
double hermitian_defect(const Matrix& a);
/// Max |a_ij − b_ij|.
double max_abs_diff(const Matrix& a, const Matrix& b);
/// (A + A*)/2.
Matrix hermitian_part(const Matrix& a);

struct EigDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // columns
};

/// Cyclic Jacobi eigensolver for Hermitian input. The input is symmetrized.
EigDecomposition herm_eig(const Matrix& a);
/// As herm_eig, with Jacobi sweeps run on W* A W for a unitary guess W
/// (typically the eigenvectors of a nearby matrix).
EigDecomposition herm_eig(const Matrix& a, const Matrix& warm_start);
double lambda_min(const Matrix& a);

/// Hermitian PSD square root; eigenvalues in [-1e-6, 0) are clipped.
Matrix psd_sqrt(const Matrix& a);
/// Frobenius-nearest PSD matrix.
Matrix psd_project(const Matrix& a);
/// As psd_project, also reporting λ_min of the input.
Matrix psd_project(const Matrix& a, double& input_lambda_min);

struct Svd {
  Matrix u;               // rows x k, orthonormal columns
  std::vector<double> s;  // descending, k = min(rows, cols)
  Matrix v;               // cols x k, orthonormal columns
};

/// One-sided Jacobi SVD: A = U diag(s) V*.
Svd svd(const Matrix& a);

/// Reinterprets M_outer(M_inner) as M_inner(M_outer).
Matrix canonical_shuffle(const Matrix& x, std::size_t outer, std::size_t inner);

/// Counter-based SplitMix64 stream.
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Uniforms take the top 53 bits: (z >> 11) * 2^-53. Gaussians use the
/// Box-Muller cosine branch on two consecutive uniforms (u1 mapped to
/// (0, 1] as 1 - u). Complex Gaussians draw the real part first and carry
/// variance 1/2 per component.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t next_u64();
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  cplx complex_normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

  /// Independent seed for task `index` of a batch driven by `master`.
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  std::uint64_t draws_ = 0;
};

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);
Matrix random_hermitian(std::size_t d, Rng& rng);
Matrix random_unitary(std::size_t d, Rng& rng);
/// Ginibre sample with singular values clipped to 1; with probability 1/2
/// rescaled so that the operator norm is exactly 1.
Matrix random_contraction(std::size_t n, std::size_t r, Rng& rng);
/// Unit vector with complex Gaussian direction.
std::vector<cplx> random_unit_vector(std::size_t d, Rng& rng);

}  // namespace unclab
