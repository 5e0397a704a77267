#include "unclab/cones.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "unclab/dilation.hpp"
#include "unclab/dykstra.hpp"

namespace unclab {

const char* to_string(ConeStatus s) {
  switch (s) {
    case ConeStatus::InMax: return "IN_MAX";
    case ConeStatus::ViolatedMin: return "VIOLATED_MIN";
    case ConeStatus::Undetermined: return "UNDETERMINED";
  }
  return "?";
}

namespace {

void require_hermitian(const VnElement& x, const char* what) {
  if (!x.is_hermitian(1e-10)) throw InvalidInput(std::string(what) + ": element is not Hermitian");
}

// Orthogonal projection onto {R Hermitian : R_ij = A_ij on Λ_n,
// Σ_i R_ii = target}. Blocks inside the two diagonal corners other than the
// diagonal itself are unconstrained.
Matrix project_completion_affine(const Matrix& in, const VnElement& x, const Matrix& target) {
  const std::size_t n = x.n();
  const std::size_t p = x.p();
  Matrix r = hermitian_part(in);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = n + 1; j <= 2 * n; ++j) {
      r.set_block((i - 1) * p, (j - 1) * p, x.at(i, j));
      r.set_block((j - 1) * p, (i - 1) * p, x.at(j, i));
    }
  }
  Matrix sum(p, p);
  for (std::size_t i = 0; i < 2 * n; ++i) sum.add_block(0, 0, r.block(i * p, i * p, p, p));
  const Matrix shift = (target - sum) * cplx(1.0 / static_cast<double>(2 * n));
  for (std::size_t i = 0; i < 2 * n; ++i) r.add_block(i * p, i * p, shift);
  return r;
}

Matrix completion_target(const VnElement& x, double eps) {
  const double two_n = static_cast<double>(2 * x.n());
  return (x.a11() + Matrix::identity(x.p()) * cplx(eps)) * cplx(two_n);
}

}  // namespace

std::optional<CompletionCertificate> max_membership(const VnElement& x, double eps,
                                                    std::size_t max_iter, double residual_tol) {
  require_hermitian(x, "max_membership");
  if (!(eps >= 0.0)) throw InvalidInput("max_membership: eps must be >= 0");
  if (max_iter < 1) throw InvalidInput("max_membership: max_iter must be >= 1");

  const Matrix target = completion_target(x, eps);
  VnElement shifted = x;
  shifted.a11() = x.a11() + Matrix::identity(x.p()) * cplx(eps);
  const Matrix start = canonical_lift(shifted).b;
  const double tol = residual_tol * std::max(1.0, frobenius_norm(x.a11()));

  const ProjectionResult dr = dykstra_psd(
      start, [&](const Matrix& m) { return project_completion_affine(m, x, target); }, max_iter,
      tol);
  if (!dr.converged) return std::nullopt;

  CompletionCertificate cert;
  cert.n = x.n();
  cert.p = x.p();
  cert.eps = eps;
  cert.r = dr.psd_iterate;
  cert.iterations = dr.iterations;
  cert.affine_residual =
      frobenius_norm(cert.r - project_completion_affine(cert.r, x, target));
  cert.psd_residual = std::max(0.0, -lambda_min(dr.affine_iterate));
  return cert;
}

// ---------------------------------------------------------------- violation search

Matrix project_to_unit_ball(const Matrix& c) {
  Svd f = svd(c);
  if (f.s.empty() || f.s.front() <= 1.0) return c;
  for (auto& s : f.s) s = std::min(s, 1.0);
  return f.u * Matrix::diagonal(std::span<const double>(f.s)) * f.v.adjoint();
}

LambdaMinGradient lambda_min_gradient(const Matrix& c, const VnElement& x) {
  const std::size_t n = x.n();
  const std::size_t p = x.p();
  const std::size_t r = c.rows() / n;
  const std::size_t rp = r * p;
  const EigDecomposition e = herm_eig(universal_ucp_eval(c, x));

  // Average projector onto the (numerically) lowest eigenspace.
  const double lo = e.eigenvalues.front();
  std::size_t mult = 0;
  while (mult < rp && e.eigenvalues[mult] - lo < 1e-10) ++mult;
  Matrix proj(rp, rp);
  for (std::size_t k = 0; k < mult; ++k)
    for (std::size_t a = 0; a < rp; ++a)
      for (std::size_t b = 0; b < rp; ++b)
        proj(a, b) += e.eigenvectors(a, k) * std::conj(e.eigenvectors(b, k));
  proj *= 1.0 / static_cast<double>(mult);

  // dλ along D is w·tr((D⊗P + D*⊗Q)·proj) summed over generator slots.
  const double w = 1.0 / static_cast<double>(2 * n);
  Matrix grad(n * r, n * r);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Matrix& plus = x.at(a + 1, n + b + 1);
      const Matrix& minus = x.at(n + b + 1, a + 1);
      for (std::size_t s = 0; s < r; ++s) {
        for (std::size_t s2 = 0; s2 < r; ++s2) {
          cplx gp = 0.0;  // Σ P_kl proj[(s2,l),(s,k)]
          cplx gq = 0.0;  // Σ Q_kl proj[(s,l),(s2,k)]
          for (std::size_t k = 0; k < p; ++k)
            for (std::size_t l = 0; l < p; ++l) {
              gp += plus(k, l) * proj(s2 * p + l, s * p + k);
              gq += minus(k, l) * proj(s * p + l, s2 * p + k);
            }
          grad(a * r + s, b * r + s2) = w * (std::conj(gp) + gq);
        }
      }
    }
  }

  LambdaMinGradient out;
  out.value = lo;
  out.gradient = std::move(grad);
  out.eigenvector.resize(rp);
  for (std::size_t a = 0; a < rp; ++a) out.eigenvector[a] = e.eigenvectors(a, 0);
  return out;
}

namespace {

struct SearchPoint {
  Matrix c;
  LambdaMinGradient eval;
};

SearchPoint descend(const VnElement& x, Matrix c, const SolverConfig& cfg, std::size_t& steps) {
  SearchPoint cur{c, lambda_min_gradient(c, x)};
  double step = 1.0;
  for (std::size_t it = 0; it < cfg.max_steps; ++it) {
    bool accepted = false;
    SearchPoint next;
    while (step >= 1e-12) {
      Matrix trial = project_to_unit_ball(cur.c - cur.eval.gradient * cplx(step));
      LambdaMinGradient ev = lambda_min_gradient(trial, x);
      if (ev.value < cur.eval.value) {
        next = {std::move(trial), std::move(ev)};
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++steps;
    if (!accepted) break;
    const double move = frobenius_norm(next.c - cur.c);
    cur = std::move(next);
    if (move / step <= cfg.grad_tol) break;
    step = std::min(step * 2.0, 1e6);
  }
  return cur;
}

}  // namespace

std::optional<ViolationCertificate> min_violation_search(const VnElement& x, std::size_t r_max,
                                                         std::size_t starts, Rng& rng,
                                                         const SolverConfig& cfg) {
  require_hermitian(x, "min_violation_search");
  if (r_max < 1 || starts < 1) throw InvalidInput("min_violation_search: r_max, starts >= 1");
  const std::size_t n = x.n();

  std::optional<ViolationCertificate> best;
  std::size_t steps = 0;
  for (std::size_t r = 1; r <= r_max; ++r) {
    for (std::size_t s = 0; s < starts; ++s) {
      SearchPoint pt = descend(x, random_contraction(n, r, rng), cfg, steps);
      if (pt.eval.value <= -cfg.tol_violation &&
          (!best || pt.eval.value < best->lambda_min)) {
        best = ViolationCertificate{n, x.p(), r, std::move(pt.c), pt.eval.value,
                                    std::move(pt.eval.eigenvector)};
      }
      if (best) return best;
    }
  }
  return best;
}

// ---------------------------------------------------------------- classify

ConeVerdict classify(const VnElement& x, const SolverConfig& cfg, Rng& rng) {
  require_hermitian(x, "classify");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t r_max = cfg.r_max ? cfg.r_max : 2 * x.n();

  ConeVerdict v;
  auto finish = [&]() {
    v.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return v;
  };

  auto viol = min_violation_search(x, r_max, cfg.starts, rng, cfg);
  if (viol) {
    if (cfg.cross_verify) {
      auto comp = max_membership(x, cfg.eps, cfg.max_iter, cfg.residual_tol);
      // The completion certifies x + eps·1 and the violation shifts by the same
      // eps, so only a violation deeper than eps contradicts it.
      if (comp && viol->lambda_min + cfg.eps <= -cfg.tol_violation) {
        throw InternalInconsistency(
            "classify: completion certificate and violation certificate (lambda_min = " +
            std::to_string(viol->lambda_min) + ") for the same element");
      }
      if (comp) v.iterations += comp->iterations;
    }
    v.status = ConeStatus::ViolatedMin;
    v.violation = std::move(viol);
    return finish();
  }
  auto comp = max_membership(x, cfg.eps, cfg.max_iter, cfg.residual_tol);
  if (comp) {
    v.status = ConeStatus::InMax;
    v.iterations += comp->iterations;
    v.completion = std::move(comp);
  }
  return finish();
}

// ---------------------------------------------------------------- verification

bool CompletionCheck::ok() const {
  return lambda_min >= -1e-8 * std::max(1.0, r_norm) && lambda_error <= 1e-8 &&
         sum_error <= 1e-8 * std::max(1.0, a11_norm);
}

CompletionCheck verify_completion(const VnElement& x, const CompletionCertificate& cert) {
  const std::size_t n = x.n();
  const std::size_t p = x.p();
  if (cert.n != n || cert.p != p || cert.r.rows() != 2 * n * p || cert.r.cols() != 2 * n * p)
    throw DimensionError("verify_completion: certificate shape mismatch");
  CompletionCheck c;
  c.lambda_min = lambda_min(cert.r);
  c.r_norm = frobenius_norm(cert.r);
  c.a11_norm = frobenius_norm(x.a11());
  const QuotientRep lift(n, p, cert.r);
  const LambdaIndex idx(n);
  for (const auto& list : {idx.plus, idx.minus})
    for (const auto& [i, j] : list)
      c.lambda_error = std::max(c.lambda_error, max_abs_diff(lift.block(i, j), x.at(i, j)));
  Matrix sum(p, p);
  for (std::size_t i = 1; i <= 2 * n; ++i) sum += lift.block(i, i);
  c.sum_error = frobenius_norm(sum - completion_target(x, cert.eps));
  return c;
}

bool ViolationCheck::ok(double certified_lambda, double tol_violation) const {
  return contraction_norm <= 1.0 + 1e-10 &&
         std::abs(witness_value - certified_lambda) <= 1e-9 &&
         recomputed_lambda_min <= -tol_violation;
}

ViolationCheck verify_violation(const VnElement& x, const ViolationCertificate& cert) {
  const Matrix f = universal_ucp_eval(cert.c, x);
  if (cert.witness.size() != f.rows()) throw DimensionError("verify_violation: witness size");
  ViolationCheck c;
  c.contraction_norm = operator_norm(cert.c);
  c.recomputed_lambda_min = lambda_min(f);
  cplx acc = 0.0;
  double nrm = 0.0;
  for (std::size_t a = 0; a < f.rows(); ++a) {
    cplx row = 0.0;
    for (std::size_t b = 0; b < f.cols(); ++b) row += f(a, b) * cert.witness[b];
    acc += std::conj(cert.witness[a]) * row;
    nrm += std::norm(cert.witness[a]);
  }
  c.witness_value = acc.real() / nrm;
  return c;
}

// ---------------------------------------------------------------- samplers

VnElement random_completion_element(std::size_t n, std::size_t p, Rng& rng) {
  const std::size_t d = 2 * n * p;
  const Matrix g = ginibre(d, d + 2, rng);
  Matrix r = g * g.adjoint();
  r *= 1.0 / static_cast<double>(d + 2);
  return phi_apply(QuotientRep(n, p, hermitian_part(r)));
}

VnElement random_hermitian_element(std::size_t n, std::size_t p, Rng& rng) {
  VnElement x(n, p);
  x.a11() = Matrix::identity(p) + random_hermitian(p, rng) * cplx(0.5);
  const double amplitude = rng.uniform(0.0, 3.0);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = n + 1; j <= 2 * n; ++j)
      x.set_hermitian_pair(i, j, ginibre(p, p, rng) * cplx(amplitude));
  return x;
}

VnElement negative_witness_element(const Matrix& s) {
  if (!s.square()) throw DimensionError("negative_witness_element: S must be square");
  const std::size_t n = s.rows();
  const Svd f = svd(s);
  const double sigma = f.s.front();
  if (!(sigma > 1.0)) throw InvalidInput("negative_witness_element: ||S|| must exceed 1");
  // Coefficients a_ab = −c·conj(u_a)·v_b have nuclear norm c < n, which keeps
  // x positive, while s(x) = 1 − (c/n)σ = (1 − σ)/2.
  const double shrink = (sigma - 1.0) / (2.0 * sigma);
  const double c = static_cast<double>(n) * (1.0 - shrink);
  VnElement x = VnElement::scalar(n, Matrix::identity(1));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Matrix blk(1, 1);
      blk(0, 0) = -c * std::conj(f.u(a, 0)) * f.v(b, 0);
      x.set_hermitian_pair(a + 1, n + b + 1, blk);
    }
  return x;
}

// ---------------------------------------------------------------- crosscheck

CrosscheckReport crosscheck_cones(std::size_t n, std::size_t p, std::size_t trials, Rng& rng,
                                    const SolverConfig& cfg) {
  if (n < 2 || p < 1) throw InvalidInput("crosscheck: need n >= 2, p >= 1");
  CrosscheckReport rep;
  rep.n = n;
  rep.p = p;
  rep.trials = trials;
  rep.seed = rng.seed();
  const std::uint64_t master = rng.next_u64();
  const std::size_t r_max = cfg.r_max ? cfg.r_max : 2 * n;
  constexpr double kRecertifyEps = 1e-9;

  for (std::size_t t = 0; t < trials; ++t) {
    Rng trial_rng(Rng::derive_seed(master, 2 * t));
    const VnElement x = random_completion_element(n, p, trial_rng);
    const auto cert = max_membership(x, kRecertifyEps, cfg.max_iter, cfg.residual_tol);
    const auto viol = min_violation_search(x, r_max, cfg.starts, trial_rng, cfg);
    if (cert) {
      ++rep.completion_recertified;
    } else {
      ++rep.completion_failures;
    }
    if (viol) ++rep.soundness_failures;
    if (cert && viol && viol->lambda_min + kRecertifyEps <= -cfg.tol_violation) ++rep.inconsistencies;
    if (viol) {
      ++rep.violated_min;
    } else if (cert) {
      ++rep.in_max;
    } else {
      ++rep.undetermined;
    }
  }

  for (std::size_t t = 0; t < trials; ++t) {
    Rng trial_rng(Rng::derive_seed(master, 2 * t + 1));
    const VnElement x = random_hermitian_element(n, p, trial_rng);
    try {
      const ConeVerdict v = classify(x, cfg, trial_rng);
      switch (v.status) {
        case ConeStatus::InMax: ++rep.in_max; break;
        case ConeStatus::ViolatedMin: ++rep.violated_min; break;
        case ConeStatus::Undetermined: ++rep.undetermined; break;
      }
    } catch (const InternalInconsistency&) {
      ++rep.inconsistencies;
    }
  }
  return rep;
}

}  // namespace unclab
