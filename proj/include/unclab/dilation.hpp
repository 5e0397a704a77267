#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "unclab/linalg.hpp"
#include "unclab/opsys.hpp"

namespace unclab {

struct NotContractionError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Images U_ij ∈ M_d of the generators u_ij. The assembled nd x nd matrix
/// (U_ij) is unitary.
struct Representation {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<Matrix> blocks;  // row-major n x n

  Representation(std::size_t n, std::size_t d);
  /// Splits an (n d) x (n d) matrix into n x n blocks.
  static Representation from_assembled(std::size_t n, const Matrix& u);

  const Matrix& at(std::size_t i, std::size_t j) const { return blocks[i * n + j]; }
  Matrix& at(std::size_t i, std::size_t j) { return blocks[i * n + j]; }

  Matrix assembled() const;
  double unitarity_residual() const;
};

/// V = [[T, √(I−TT*)], [√(I−T*T), −T*]]. The upper-left corner is a copy of T.
/// Singular values in (1, 1 + 1e-10] are treated as 1.
Matrix unitary_dilation(const Matrix& t);

/// Image of x under the ucp map V_n → M_r fixed by u_ij ↦ T_ij, tensored with
/// id_p. T is an (n r) x (n r) contraction; the result is (r p) x (r p).
Matrix universal_ucp_eval(const Matrix& t, const VnElement& x);

/// Compress each U_ij to the first m coordinates and dilate back to a
/// representation on C^{2m}.
Representation rfd_compression(const Representation& rep, std::size_t m);

/// Diagonal representation U_ii = W_i, U_ij = 0 for i ≠ j.
Representation retract_diag(std::span<const Matrix> w);

/// A generator u_ij (0-based) or its adjoint.
struct Letter {
  std::size_t i = 0;
  std::size_t j = 0;
  bool star = false;
};

inline constexpr std::size_t kMaxWordLength = 8;

/// Product of generator images in `rep`, left to right.
Matrix evaluate_word(const Representation& rep, std::span<const Letter> word);

}  // namespace unclab
