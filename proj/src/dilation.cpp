#include "unclab/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace unclab {

Representation::Representation(std::size_t n_, std::size_t d_)
    : n(n_), d(d_), blocks(n_ * n_, Matrix(d_, d_)) {
  if (n == 0 || d == 0) throw InvalidInput("Representation: n and d must be >= 1");
}

Representation Representation::from_assembled(std::size_t n, const Matrix& u) {
  if (n == 0 || !u.square() || u.rows() % n != 0)
    throw DimensionError("Representation: assembled matrix must be (n d) x (n d)");
  const std::size_t d = u.rows() / n;
  Representation rep(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rep.at(i, j) = u.block(i * d, j * d, d, d);
  return rep;
}

Matrix Representation::assembled() const {
  Matrix u(n * d, n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u.set_block(i * d, j * d, at(i, j));
  return u;
}

double Representation::unitarity_residual() const {
  const Matrix u = assembled();
  return frobenius_norm(u.adjoint() * u - Matrix::identity(u.rows()));
}

Matrix unitary_dilation(const Matrix& t) {
  if (!t.square()) throw DimensionError("unitary_dilation: T must be square");
  const std::size_t k = t.rows();
  const Svd f = svd(t);
  if (!f.s.empty() && f.s.front() > 1.0 + 1e-10) {
    throw NotContractionError("unitary_dilation: ||T|| = " + std::to_string(f.s.front()));
  }
  // √(I−TT*) = U √(1−s²) U* and √(I−T*T) = V √(1−s²) V* share one SVD, so the
  // intertwining T*√(I−TT*) = √(I−T*T)T* holds to rounding.
  std::vector<double> defect(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double s = std::min(f.s[i], 1.0);
    defect[i] = std::sqrt(std::max(0.0, (1.0 - s) * (1.0 + s)));
  }
  const Matrix dd = Matrix::diagonal(std::span<const double>(defect));
  const Matrix left = hermitian_part(f.u * dd * f.u.adjoint());
  const Matrix right = hermitian_part(f.v * dd * f.v.adjoint());

  Matrix v(2 * k, 2 * k);
  v.set_block(0, 0, t);
  v.set_block(0, k, left);
  v.set_block(k, 0, right);
  v.set_block(k, k, t.adjoint() * cplx(-1.0));
  return v;
}

Matrix universal_ucp_eval(const Matrix& t, const VnElement& x) {
  const std::size_t n = x.n();
  const std::size_t p = x.p();
  if (!t.square() || t.rows() % n != 0) {
    throw DimensionError("universal_ucp_eval: T must be (n r) x (n r) with n = " +
                         std::to_string(n));
  }
  const std::size_t r = t.rows() / n;
  const std::size_t rp = r * p;
  const double w = 1.0 / static_cast<double>(2 * n);

  Matrix f(rp, rp);
  const Matrix& a11 = x.a11();
  for (std::size_t s = 0; s < r; ++s) f.add_block(s * p, s * p, a11);

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Matrix& plus = x.at(a + 1, n + b + 1);   // coefficient of u_ab
      const Matrix& minus = x.at(n + b + 1, a + 1);  // coefficient of u_ab*
      for (std::size_t s = 0; s < r; ++s) {
        for (std::size_t s2 = 0; s2 < r; ++s2) {
          const cplx tab = t(a * r + s, b * r + s2);         // (T_ab)_{s s2}
          const cplx tab_adj = std::conj(t(a * r + s2, b * r + s));  // (T_ab*)_{s s2}
          if (tab == cplx{} && tab_adj == cplx{}) continue;
          for (std::size_t k = 0; k < p; ++k)
            for (std::size_t l = 0; l < p; ++l)
              f(s * p + k, s2 * p + l) += w * (tab * plus(k, l) + tab_adj * minus(k, l));
        }
      }
    }
  }
  return f;
}

Representation rfd_compression(const Representation& rep, std::size_t m) {
  if (m < 1 || m > rep.d) {
    throw InvalidInput("rfd_compression: m = " + std::to_string(m) + " outside [1, " +
                       std::to_string(rep.d) + "]");
  }
  const std::size_t n = rep.n;
  Matrix vm(n * m, n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) vm.set_block(i * m, j * m, rep.at(i, j).block(0, 0, m, m));

  // M_2(M_n(M_m)) -> M_n(M_m(M_2)) -> M_n(M_2(M_m)).
  const Matrix dilated = canonical_shuffle(unitary_dilation(vm), 2, n * m);
  Representation out(n, 2 * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.at(i, j) = canonical_shuffle(dilated.block(i * 2 * m, j * 2 * m, 2 * m, 2 * m), m, 2);
  return out;
}

Representation retract_diag(std::span<const Matrix> w) {
  if (w.empty()) throw InvalidInput("retract_diag: need at least one unitary");
  const std::size_t d = w.front().rows();
  Representation rep(w.size(), d);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w[i].square() || w[i].rows() != d) throw DimensionError("retract_diag: size mismatch");
    const double res = frobenius_norm(w[i].adjoint() * w[i] - Matrix::identity(d));
    if (res > 1e-9) {
      throw InvalidInput("retract_diag: W_" + std::to_string(i + 1) +
                         " is not unitary (residual " + std::to_string(res) + ")");
    }
    rep.at(i, i) = w[i];
  }
  return rep;
}

Matrix evaluate_word(const Representation& rep, std::span<const Letter> word) {
  if (word.size() > kMaxWordLength) {
    throw InvalidInput("evaluate_word: words are limited to " +
                       std::to_string(kMaxWordLength) + " letters");
  }
  Matrix out = Matrix::identity(rep.d);
  for (const Letter& l : word) {
    if (l.i >= rep.n || l.j >= rep.n) throw InvalidInput("evaluate_word: letter out of range");
    out = out * (l.star ? rep.at(l.i, l.j).adjoint() : rep.at(l.i, l.j));
  }
  return out;
}

}  // namespace unclab
