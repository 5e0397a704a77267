#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "unclab/linalg.hpp"
#include "unclab/opsys.hpp"

namespace unclab {

struct InternalInconsistency : std::logic_error {
  using std::logic_error::logic_error;
};

/// PSD R ∈ M_2n(M_p) with R_ij = A_ij on Λ_n and Σ_i R_ii = 2n(A11 + eps·I).
struct CompletionCertificate {
  std::size_t n = 0;
  std::size_t p = 0;
  double eps = 0.0;
  Matrix r;
  double affine_residual = 0.0;
  double psd_residual = 0.0;
  std::size_t iterations = 0;
};

/// Contraction C ∈ M_n(M_r) and unit vector w with ⟨F(C,x)w, w⟩ = lambda_min < 0.
struct ViolationCertificate {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t r = 0;
  Matrix c;
  double lambda_min = 0.0;
  std::vector<cplx> witness;
};

enum class ConeStatus { InMax, ViolatedMin, Undetermined };

const char* to_string(ConeStatus s);

struct ConeVerdict {
  ConeStatus status = ConeStatus::Undetermined;
  std::optional<CompletionCertificate> completion;
  std::optional<ViolationCertificate> violation;
  std::size_t iterations = 0;  // Dykstra iterations plus gradient steps
  double elapsed_seconds = 0.0;
};

struct SolverConfig {
  double eps = 1e-6;
  std::size_t max_iter = 50000;
  std::size_t r_max = 0;  // 0 means 2n
  std::size_t starts = 32;
  std::size_t max_steps = 2000;
  double residual_tol = 1e-9;
  double grad_tol = 1e-9;
  double tol_violation = 1e-7;
  /// On a violation, also run the completion solver to detect contradictions.
  bool cross_verify = true;
};

/// Positive completion search by Dykstra's alternating projections, started
/// at the canonical lift of x + eps·1.
std::optional<CompletionCertificate> max_membership(const VnElement& x, double eps,
                                                    std::size_t max_iter,
                                                    double residual_tol = 1e-9);

/// Projected-gradient minimization of λ_min(F(C, x)) over contractions C,
/// sweeping r = 1..r_max with `starts` random initial points per r.
std::optional<ViolationCertificate> min_violation_search(const VnElement& x, std::size_t r_max,
                                                         std::size_t starts, Rng& rng,
                                                         const SolverConfig& cfg = {});

/// λ_min of F(C, x) together with the gradient with respect to C, where the
/// eigenvector outer product is averaged over eigenvalues within 1e-10 of λ_min.
struct LambdaMinGradient {
  double value = 0.0;
  Matrix gradient;
  std::vector<cplx> eigenvector;
};
LambdaMinGradient lambda_min_gradient(const Matrix& c, const VnElement& x);

/// Nearest point of the operator-norm unit ball (singular values clipped at 1).
Matrix project_to_unit_ball(const Matrix& c);

ConeVerdict classify(const VnElement& x, const SolverConfig& cfg, Rng& rng);

struct CompletionCheck {
  double lambda_min = 0.0;
  double r_norm = 0.0;        // ‖R‖_F
  double lambda_error = 0.0;  // max |R_ij − A_ij| over Λ_n
  double sum_error = 0.0;     // ‖Σ R_ii − 2n(A11 + eps I)‖_F
  double a11_norm = 0.0;      // ‖A11‖_F
  bool ok() const;
};
/// Re-verifies the three certificate invariants with a fresh eigensolve.
CompletionCheck verify_completion(const VnElement& x, const CompletionCertificate& cert);

struct ViolationCheck {
  double contraction_norm = 0.0;
  double recomputed_lambda_min = 0.0;
  double witness_value = 0.0;
  bool ok(double certified_lambda, double tol_violation = 1e-7) const;
};
ViolationCheck verify_violation(const VnElement& x, const ViolationCertificate& cert);

/// Element φ(R) for a random PSD R ∈ M_2n(M_p); positive by construction.
VnElement random_completion_element(std::size_t n, std::size_t p, Rng& rng);
/// Hermitian element with random coefficients, not necessarily positive.
VnElement random_hermitian_element(std::size_t n, std::size_t p, Rng& rng);

/// Positive p = 1 element x with s(x) < 0 for the functional s(u_ij) = S_ij,
/// when ‖S‖ > 1. Built from the top singular pair of S.
VnElement negative_witness_element(const Matrix& s);

struct CrosscheckReport {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t in_max = 0;
  std::size_t violated_min = 0;
  std::size_t undetermined = 0;
  std::size_t completion_recertified = 0;
  std::size_t completion_failures = 0;  // completion elements not recertified
  std::size_t soundness_failures = 0;   // completion elements with a violation
  std::size_t inconsistencies = 0;      // elements carrying both certificates
};

/// Runs `trials` completion-generated elements (must certify, must not be
/// violated) and `trials` random Hermitian elements (must not receive both
/// certificates). Per-trial seeds are derived from rng's seed.
CrosscheckReport crosscheck_cones(std::size_t n, std::size_t p, std::size_t trials, Rng& rng,
                                    const SolverConfig& cfg = {});

}  // namespace unclab
