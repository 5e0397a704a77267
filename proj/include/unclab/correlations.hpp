#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "unclab/linalg.hpp"

namespace unclab {

/// One factor of a generator x ⊗ y: the unit, a generator, or its adjoint.
struct GenLetter {
  enum class Kind { One, Gen, Adj };
  Kind kind = Kind::One;
  std::size_t i = 0;  // 0-based
  std::size_t j = 0;

  GenLetter star() const;
  bool operator==(const GenLetter&) const = default;
};

/// Label such as "1", "u:1:2", "u*:1:2" (1-based indices). `symbol` is "u"
/// for the first factor and "v" for the second.
std::string letter_label(const GenLetter& l, char symbol);
GenLetter parse_letter(const std::string& label, char symbol, std::size_t n);

/// Ordered generator set: for each factor 1, then generators by (i,j)
/// row-major, then adjoints by (i,j); x-major.
class GeneratorIndex {
 public:
  GeneratorIndex(std::size_t n1, std::size_t n2);

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  std::size_t size() const { return x_count() * y_count(); }
  std::size_t x_count() const { return 2 * n1_ * n1_ + 1; }
  std::size_t y_count() const { return 2 * n2_ * n2_ + 1; }

  /// Position of a letter within one factor's list.
  static std::size_t letter_position(const GenLetter& l, std::size_t n);
  static GenLetter letter_at(std::size_t pos, std::size_t n);

  std::size_t position(const GenLetter& x, const GenLetter& y) const;
  GenLetter x_at(std::size_t k) const { return letter_at(k / y_count(), n1_); }
  GenLetter y_at(std::size_t k) const { return letter_at(k % y_count(), n2_); }

  bool operator==(const GeneratorIndex&) const = default;

 private:
  std::size_t n1_;
  std::size_t n2_;
};

struct CorrelationTuple {
  GeneratorIndex index;
  std::vector<cplx> values;

  CorrelationTuple(std::size_t n1, std::size_t n2);

  cplx at(const GenLetter& x, const GenLetter& y) const { return values[index.position(x, y)]; }
  cplx& at(const GenLetter& x, const GenLetter& y) { return values[index.position(x, y)]; }
};

struct TupleInvariantReport {
  double unit_error = 0.0;       // |t(1,1) − 1|
  double conjugate_error = 0.0;  // max |t(x*,y*) − conj t(x,y)|
  double max_abs = 0.0;          // max |t|
  bool ok() const { return unit_error <= 1e-10 && conjugate_error <= 1e-10 && max_abs <= 1 + 1e-8; }
};

TupleInvariantReport check_tuple(const CorrelationTuple& t);

/// ⟨(X⊗Y)ξ, ξ⟩ over the generator grid for Haar unitaries U ∈ M_n1(M_dA),
/// V ∈ M_n2(M_dB) and a random unit vector ξ (drawn in that order).
/// `identity_override` replaces U and V by identities (ξ is still drawn).
CorrelationTuple sample_ucq(std::size_t n1, std::size_t n2, std::size_t da, std::size_t db,
                            Rng& rng, bool identity_override = false);

/// Tuple produced by explicit unitaries and state.
CorrelationTuple tensor_correlation(std::size_t n1, std::size_t n2, const Matrix& u,
                                    const Matrix& v, const std::vector<cplx>& xi);

/// Entrywise w·t1 + (1−w)·t2.
CorrelationTuple tuple_convex_combine(const CorrelationTuple& t1, const CorrelationTuple& t2,
                                      double w);

/// t'(x, y) = conj t(x*, y*).
CorrelationTuple conjugate_relabel(const CorrelationTuple& t);

/// Word list of the level-1 moment matrix: 1, u_ij, u*_ij, v_kl, v*_kl.
class MomentLayout {
 public:
  MomentLayout(std::size_t n1, std::size_t n2) : n1_(n1), n2_(n2) {}
  std::size_t size() const { return 1 + 2 * n1_ * n1_ + 2 * n2_ * n2_; }
  std::size_t u(std::size_t i, std::size_t j) const { return 1 + i * n1_ + j; }
  std::size_t u_adj(std::size_t i, std::size_t j) const { return 1 + n1_ * n1_ + i * n1_ + j; }
  std::size_t v(std::size_t k, std::size_t l) const { return 1 + 2 * n1_ * n1_ + k * n2_ + l; }
  std::size_t v_adj(std::size_t k, std::size_t l) const {
    return 1 + 2 * n1_ * n1_ + n2_ * n2_ + k * n2_ + l;
  }
  /// Row/column of letter `l` of the first (`first` = true) or second factor.
  std::size_t of(const GenLetter& l, bool first) const;

 private:
  std::size_t n1_;
  std::size_t n2_;
};

struct MomentMatrix {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  Matrix m;  // m(a, b) stands for s(a† b)
};

struct MomentCheck {
  double hermitian_defect = 0.0;
  double unit_error = 0.0;
  double lambda_min = 0.0;
  double data_error = 0.0;
  double unitarity_error = 0.0;
  bool ok(double tol = 1e-8) const {
    return hermitian_defect <= tol && unit_error <= tol && lambda_min >= -tol &&
           data_error <= tol && unitarity_error <= tol;
  }
};

/// Independent check of every moment-matrix constraint against `t`.
MomentCheck check_moment_matrix(const MomentMatrix& mm, const CorrelationTuple& t);

/// Moment matrix of an explicit tensor model (used as a construction oracle).
MomentMatrix moment_matrix_of(std::size_t n1, std::size_t n2, const Matrix& u, const Matrix& v,
                              const std::vector<cplx>& xi);

enum class NpaVerdict { Feasible, InfeasibleEvidence, Undetermined };

const char* to_string(NpaVerdict v);

struct NpaResult {
  NpaVerdict verdict = NpaVerdict::Undetermined;
  std::optional<MomentMatrix> moment;
  std::string reason;  // failed necessary condition, when infeasible
  std::size_t iterations = 0;
  double residual = 0.0;
};

struct NpaConfig {
  std::size_t max_iter = 50000;
  double residual_tol = 1e-9;
  double condition_tol = 1e-9;
};

/// Level-1 moment-matrix outer test for UC_qc membership.
NpaResult npa_check(const CorrelationTuple& t, const NpaConfig& cfg = {});

}  // namespace unclab
