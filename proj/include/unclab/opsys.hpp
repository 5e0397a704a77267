#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "unclab/linalg.hpp"

namespace unclab {

/// 1-based index pair into the 2n x 2n block grid.
using BlockIndex = std::pair<std::size_t, std::size_t>;

/// Off-diagonal corner index sets of the 2n x 2n grid: the upper-right
/// corner (plus) and the lower-left corner (minus).
struct LambdaIndex {
  std::size_t n = 0;
  std::vector<BlockIndex> plus;
  std::vector<BlockIndex> minus;

  explicit LambdaIndex(std::size_t n);

  static bool in_plus(std::size_t n, std::size_t i, std::size_t j) {
    return i >= 1 && i <= n && j >= n + 1 && j <= 2 * n;
  }
  static bool in_minus(std::size_t n, std::size_t i, std::size_t j) {
    return i >= n + 1 && i <= 2 * n && j >= 1 && j <= n;
  }
  static bool contains(std::size_t n, std::size_t i, std::size_t j) {
    return in_plus(n, i, j) || in_minus(n, i, j);
  }
};

/// Element of V_n ⊗ M_p in coefficient normal form
///
///   x = 1⊗A11 + Σ_{(i,j)∈Λ⁺} (1/2n) u_{i,j−n}⊗A_ij + Σ_{(i,j)∈Λ⁻} (1/2n) u*_{j,i−n}⊗A_ij.
///
/// The 1/2n factor is part of the representation: A_ij is the block that
/// sits at (i,j) of a lift in M_{2n}(M_p).
class VnElement {
 public:
  VnElement(std::size_t n, std::size_t p);

  /// 1⊗a11 with all generator coefficients zero.
  static VnElement scalar(std::size_t n, const Matrix& a11);

  std::size_t n() const { return n_; }
  std::size_t p() const { return p_; }

  const Matrix& a11() const { return a11_; }
  Matrix& a11() { return a11_; }

  /// Coefficient at (i,j) ∈ Λ_n, 1-based. Throws InvalidInput outside Λ_n.
  const Matrix& at(std::size_t i, std::size_t j) const;
  Matrix& at(std::size_t i, std::size_t j);
  /// Writes `block` at (i,j) and its adjoint at (j,i).
  void set_hermitian_pair(std::size_t i, std::size_t j, const Matrix& block);

  /// A11 = A11* and A_ji = A_ij* to `tol` (Frobenius).
  bool is_hermitian(double tol = 1e-10) const;
  /// Largest Frobenius norm over all coefficients.
  double scale() const;

  VnElement scaled(double t) const;
  VnElement operator+(const VnElement& o) const;
  bool operator==(const VnElement& o) const = default;

 private:
  std::size_t slot(std::size_t i, std::size_t j) const;

  std::size_t n_;
  std::size_t p_;
  Matrix a11_;
  std::vector<Matrix> blocks_;  // Λ⁺ row-major, then Λ⁻ row-major
};

/// Element 1⊗A0 + (1/2n) Σ_i (w_i⊗W_i + w_i*⊗Wstar_i) of S_n ⊗ M_p, using the
/// same 1/2n convention as VnElement so that coefficients transfer unchanged.
struct SnElement {
  std::size_t n = 0;
  std::size_t p = 0;
  Matrix a0;
  std::vector<Matrix> w;
  std::vector<Matrix> wstar;

  SnElement(std::size_t n, std::size_t p);
  bool is_hermitian(double tol = 1e-10) const;
  bool operator==(const SnElement& o) const = default;
};

/// [[λI, X], [Y*, λI]] in M_2(M_n).
struct S0Element {
  std::size_t n = 0;
  cplx lambda = 0.0;
  Matrix x;
  Matrix y;

  Matrix to_matrix() const;
};

/// Arbitrary lift in M_{2n} ⊗ M_p, viewed as a 2n x 2n grid of p x p blocks.
struct QuotientRep {
  std::size_t n = 0;
  std::size_t p = 0;
  Matrix b;

  QuotientRep(std::size_t n, std::size_t p);
  QuotientRep(std::size_t n, std::size_t p, Matrix b);

  /// 1-based block access.
  Matrix block(std::size_t i, std::size_t j) const;
  void set_block(std::size_t i, std::size_t j, const Matrix& m);
};

/// The quotient map φ ⊗ id_p : M_{2n}(M_p) → V_n ⊗ M_p.
VnElement phi_apply(const QuotientRep& lift);

/// Canonical lift: B_ii = A11 for all i, B_ij = A_ij on Λ_n, zero elsewhere.
QuotientRep canonical_lift(const VnElement& x);

/// Membership of a p = 1 lift in the kernel J_2n.
bool j2n_member(const QuotientRep& lift, double tol = 1e-10);

/// Choi matrix of φ in the concrete representation u_ij ↦ U_ij:
/// [[I/2n, U/2n], [U*/2n, I/2n]]. Default representation is U = I_n.
Matrix choi_of_phi(std::size_t n, const std::optional<Matrix>& representation = std::nullopt);

/// Whether s(1) = λ, s(u_ij) = S_ij, s(u_ij*) = conj(S_ij) is a state on V_n.
bool vn_state_check(cplx lambda, const Matrix& s);

/// Coefficient-level retraction V_n → S_n (u_ii ↦ w_i, u_ij ↦ 0 for i ≠ j).
SnElement retract_pi(const VnElement& x);
/// Coefficient-level embedding S_n → V_n (w_i ↦ u_ii).
VnElement retract_psi(const SnElement& y);

}  // namespace unclab
