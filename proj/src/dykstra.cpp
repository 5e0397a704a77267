#include "unclab/dykstra.hpp"

#include <algorithm>

namespace unclab {

namespace {

// Consecutive cone projections see nearby matrices, so the previous
// eigenbasis nearly diagonalizes the next input. A cold solve every
// kRefresh iterations keeps the accumulated basis from drifting.
constexpr std::size_t kRefresh = 64;

// Stall test: over a window of kWindow iterations the gap must shrink by
// more than a factor (1 - kMinProgress) while it is above kStallFloor·tol.
constexpr std::size_t kWindow = 500;
constexpr double kMinProgress = 1e-6;
constexpr double kStallFloor = 1e3;

Matrix project_warm(const Matrix& a, Matrix& basis, std::size_t iteration) {
  const EigDecomposition e =
      (basis.empty() || iteration % kRefresh == 0) ? herm_eig(a) : herm_eig(a, basis);
  basis = e.eigenvectors;
  const std::size_t n = a.rows();
  if (e.eigenvalues.empty() || e.eigenvalues.front() >= 0.0) return hermitian_part(a);
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = e.eigenvalues[k];
    if (lam <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx qik = lam * e.eigenvectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += qik * std::conj(e.eigenvectors(j, k));
    }
  }
  return hermitian_part(out);
}

}  // namespace

ProjectionResult dykstra_psd(const Matrix& start, const AffineProjection& affine,
                          std::size_t max_iter, double tol) {
  const std::size_t n = start.rows();
  Matrix x = hermitian_part(start);
  Matrix p(n, n);  // correction for the affine step
  Matrix q(n, n);  // correction for the cone step
  Matrix basis;

  ProjectionResult out;
  double window_gap = 0.0;
  for (std::size_t k = 0; k < max_iter; ++k) {
    const Matrix xp = x + p;
    Matrix y = affine(xp);
    p = xp - y;
    const Matrix yq = y + q;
    x = project_warm(yq, basis, k);
    q = yq - x;

    out.iterations = k + 1;
    out.gap = frobenius_norm(x - y);
    out.affine_iterate = std::move(y);
    if (out.gap <= tol) {
      out.converged = true;
      break;
    }
    if ((k + 1) % kWindow == 0) {
      if (k + 1 > kWindow && out.gap > kStallFloor * tol &&
          out.gap > (1.0 - kMinProgress) * window_gap) {
        out.stalled = true;
        break;
      }
      window_gap = out.gap;
    }
  }
  out.psd_iterate = std::move(x);
  return out;
}

ProjectionResult douglas_rachford_psd(const Matrix& start, const AffineProjection& affine,
                                   std::size_t max_iter, double tol) {
  Matrix z = hermitian_part(start);
  Matrix basis;
  ProjectionResult out;
  for (std::size_t k = 0; k < max_iter; ++k) {
    Matrix x = project_warm(z, basis, k);
    Matrix y = affine(x * cplx(2.0) - z);
    z += y - x;

    out.iterations = k + 1;
    const double lam = lambda_min(y);
    out.gap = std::max(0.0, -lam);
    out.psd_iterate = std::move(x);
    out.affine_iterate = std::move(y);
    if (lam >= -tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace unclab
