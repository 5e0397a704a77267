#pragma once

#include <cstddef>
#include <functional>

#include "unclab/linalg.hpp"

namespace unclab {

/// Orthogonal projection onto an affine set of Hermitian matrices.
using AffineProjection = std::function<Matrix(const Matrix&)>;

struct ProjectionResult {
  Matrix psd_iterate;     // last projection onto the PSD cone
  Matrix affine_iterate;  // last projection onto the affine set
  std::size_t iterations = 0;
  double gap = 0.0;       // ‖psd_iterate − affine_iterate‖_F
  bool converged = false;
  bool stalled = false;   // gap stopped shrinking far above tolerance
};

/// Dykstra's alternating projections between an affine set and the PSD cone,
/// started at `start`. Stops once the two iterates are within `tol`, or
/// when the gap has levelled off well above `tol` (the sets are then
/// numerically disjoint and further iterations only approach their distance).
ProjectionResult dykstra_psd(const Matrix& start, const AffineProjection& affine,
                          std::size_t max_iter, double tol);

/// Douglas-Rachford splitting for the same pair of sets. Unlike Dykstra it does
/// not target the projection of `start`, only some point of the intersection,
/// and it copes much better with thin intersections. Stops once the affine
/// iterate has λ_min ≥ −tol; `gap` then reports max(0, −λ_min).
ProjectionResult douglas_rachford_psd(const Matrix& start, const AffineProjection& affine,
                                   std::size_t max_iter, double tol);

}  // namespace unclab
