#include "unclab/opsys.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace unclab {

namespace {

void require_n(std::size_t n, std::size_t least = 2) {
  if (n < least) throw InvalidInput("n must be >= " + std::to_string(least));
}

void require_p(std::size_t p) {
  if (p < 1) throw InvalidInput("p must be >= 1");
}

}  // namespace

LambdaIndex::LambdaIndex(std::size_t n_) : n(n_) {
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = n + 1; j <= 2 * n; ++j) plus.emplace_back(i, j);
  for (std::size_t i = n + 1; i <= 2 * n; ++i)
    for (std::size_t j = 1; j <= n; ++j) minus.emplace_back(i, j);
}

// ---------------------------------------------------------------- VnElement

VnElement::VnElement(std::size_t n, std::size_t p)
    : n_(n), p_(p), a11_(p, p), blocks_(2 * n * n, Matrix(p, p)) {
  require_n(n);
  require_p(p);
}

VnElement VnElement::scalar(std::size_t n, const Matrix& a11) {
  if (!a11.square()) throw DimensionError("VnElement::scalar: A11 must be square");
  VnElement x(n, a11.rows());
  x.a11_ = a11;
  return x;
}

std::size_t VnElement::slot(std::size_t i, std::size_t j) const {
  if (LambdaIndex::in_plus(n_, i, j)) return (i - 1) * n_ + (j - n_ - 1);
  if (LambdaIndex::in_minus(n_, i, j)) return n_ * n_ + (i - n_ - 1) * n_ + (j - 1);
  throw InvalidInput("(" + std::to_string(i) + "," + std::to_string(j) +
                     ") is not in Lambda_" + std::to_string(n_));
}

const Matrix& VnElement::at(std::size_t i, std::size_t j) const { return blocks_[slot(i, j)]; }
Matrix& VnElement::at(std::size_t i, std::size_t j) { return blocks_[slot(i, j)]; }

void VnElement::set_hermitian_pair(std::size_t i, std::size_t j, const Matrix& block) {
  if (block.rows() != p_ || block.cols() != p_) throw DimensionError("block must be p x p");
  at(i, j) = block;
  at(j, i) = block.adjoint();
}

bool VnElement::is_hermitian(double tol) const {
  if (hermitian_defect(a11_) > tol) return false;
  for (std::size_t i = 1; i <= n_; ++i)
    for (std::size_t j = n_ + 1; j <= 2 * n_; ++j)
      if (frobenius_norm(at(i, j) - at(j, i).adjoint()) > tol) return false;
  return true;
}

double VnElement::scale() const {
  double s = frobenius_norm(a11_);
  for (const auto& b : blocks_) s = std::max(s, frobenius_norm(b));
  return s;
}

VnElement VnElement::scaled(double t) const {
  VnElement out = *this;
  out.a11_ *= t;
  for (auto& b : out.blocks_) b *= t;
  return out;
}

VnElement VnElement::operator+(const VnElement& o) const {
  if (n_ != o.n_ || p_ != o.p_) throw DimensionError("VnElement +: shape mismatch");
  VnElement out = *this;
  out.a11_ += o.a11_;
  for (std::size_t k = 0; k < blocks_.size(); ++k) out.blocks_[k] += o.blocks_[k];
  return out;
}

// ---------------------------------------------------------------- SnElement / S0

SnElement::SnElement(std::size_t n_, std::size_t p_)
    : n(n_), p(p_), a0(p_, p_), w(n_, Matrix(p_, p_)), wstar(n_, Matrix(p_, p_)) {
  require_n(n_, 1);
  require_p(p_);
}

bool SnElement::is_hermitian(double tol) const {
  if (hermitian_defect(a0) > tol) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (frobenius_norm(wstar[i] - w[i].adjoint()) > tol) return false;
  return true;
}

Matrix S0Element::to_matrix() const {
  if (x.rows() != n || x.cols() != n || y.rows() != n || y.cols() != n)
    throw DimensionError("S0Element: X and Y must be n x n");
  Matrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = lambda;
    m(n + i, n + i) = lambda;
  }
  m.set_block(0, n, x);
  m.set_block(n, 0, y.adjoint());
  return m;
}

// ---------------------------------------------------------------- QuotientRep

QuotientRep::QuotientRep(std::size_t n_, std::size_t p_)
    : n(n_), p(p_), b(2 * n_ * p_, 2 * n_ * p_) {
  require_n(n_);
  require_p(p_);
}

QuotientRep::QuotientRep(std::size_t n_, std::size_t p_, Matrix b_)
    : n(n_), p(p_), b(std::move(b_)) {
  require_n(n_);
  require_p(p_);
  if (b.rows() != 2 * n * p || b.cols() != 2 * n * p) {
    throw DimensionError("QuotientRep: lift must be " + std::to_string(2 * n * p) +
                         " square, got " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

Matrix QuotientRep::block(std::size_t i, std::size_t j) const {
  return b.block((i - 1) * p, (j - 1) * p, p, p);
}

void QuotientRep::set_block(std::size_t i, std::size_t j, const Matrix& m) {
  b.set_block((i - 1) * p, (j - 1) * p, m);
}

// ---------------------------------------------------------------- maps

VnElement phi_apply(const QuotientRep& lift) {
  const std::size_t n = lift.n;
  const std::size_t p = lift.p;
  if (lift.b.rows() != 2 * n * p || lift.b.cols() != 2 * n * p)
    throw DimensionError("phi_apply: lift shape mismatch");
  VnElement x(n, p);
  // Mean of the diagonal blocks taken about the first one, so equal blocks
  // (as in a canonical lift) come back bit-for-bit.
  const Matrix first = lift.block(1, 1);
  Matrix spread(p, p);
  for (std::size_t i = 2; i <= 2 * n; ++i) spread += lift.block(i, i) - first;
  x.a11() = first + spread * cplx(1.0 / static_cast<double>(2 * n));
  const LambdaIndex idx(n);
  for (const auto& [i, j] : idx.plus) x.at(i, j) = lift.block(i, j);
  for (const auto& [i, j] : idx.minus) x.at(i, j) = lift.block(i, j);
  if (hermitian_defect(lift.b) <= 1e-12 * std::max(1.0, frobenius_norm(lift.b)))
    x.a11() = hermitian_part(x.a11());
  return x;
}

QuotientRep canonical_lift(const VnElement& x) {
  QuotientRep lift(x.n(), x.p());
  for (std::size_t i = 1; i <= 2 * x.n(); ++i) lift.set_block(i, i, x.a11());
  const LambdaIndex idx(x.n());
  for (const auto& [i, j] : idx.plus) lift.set_block(i, j, x.at(i, j));
  for (const auto& [i, j] : idx.minus) lift.set_block(i, j, x.at(i, j));
  return lift;
}

bool j2n_member(const QuotientRep& lift, double tol) {
  if (lift.p != 1) throw InvalidInput("j2n_member: kernel lives in M_2n (p must be 1)");
  const std::size_t n = lift.n;
  const Matrix& b = lift.b;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(b(i, n + j)) > tol || std::abs(b(n + i, j)) > tol) return false;
  return std::abs(trace(b)) <= tol;
}

Matrix choi_of_phi(std::size_t n, const std::optional<Matrix>& representation) {
  require_n(n, 1);
  const Matrix u = representation.value_or(Matrix::identity(n));
  if (!u.square() || u.rows() % n != 0)
    throw DimensionError("choi_of_phi: representation must be (n d) x (n d)");
  const double defect = frobenius_norm(u.adjoint() * u - Matrix::identity(u.rows()));
  if (defect > 1e-8) {
    throw InvalidInput("choi_of_phi: representation is not unitary (residual " +
                       std::to_string(defect) + ")");
  }
  const std::size_t m = u.rows();
  const cplx scale(1.0 / static_cast<double>(2 * n));
  Matrix c(2 * m, 2 * m);
  c.set_block(0, 0, Matrix::identity(m) * scale);
  c.set_block(m, m, Matrix::identity(m) * scale);
  c.set_block(0, m, u * scale);
  c.set_block(m, 0, u.adjoint() * scale);
  return c;
}

bool vn_state_check(cplx lambda, const Matrix& s) {
  if (!s.square()) throw DimensionError("vn_state_check: S must be square");
  if (std::abs(lambda - 1.0) > 1e-10) return false;
  return operator_norm(s) <= 1.0 + 1e-10;
}

SnElement retract_pi(const VnElement& x) {
  const std::size_t n = x.n();
  SnElement y(n, x.p());
  y.a0 = x.a11();
  for (std::size_t i = 1; i <= n; ++i) {
    y.w[i - 1] = x.at(i, n + i);
    y.wstar[i - 1] = x.at(n + i, i);
  }
  return y;
}

VnElement retract_psi(const SnElement& y) {
  const std::size_t n = y.n;
  if (y.w.size() != n || y.wstar.size() != n) throw DimensionError("retract_psi: bad SnElement");
  VnElement x(n, y.p);
  x.a11() = y.a0;
  for (std::size_t i = 1; i <= n; ++i) {
    x.at(i, n + i) = y.w[i - 1];
    x.at(n + i, i) = y.wstar[i - 1];
  }
  return x;
}

}  // namespace unclab
