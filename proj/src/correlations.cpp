#include "unclab/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "unclab/dykstra.hpp"

namespace unclab {

// ---------------------------------------------------------------- letters

GenLetter GenLetter::star() const {
  switch (kind) {
    case Kind::One: return *this;
    case Kind::Gen: return {Kind::Adj, i, j};
    case Kind::Adj: return {Kind::Gen, i, j};
  }
  return *this;
}

std::string letter_label(const GenLetter& l, char symbol) {
  if (l.kind == GenLetter::Kind::One) return "1";
  std::ostringstream os;
  os << symbol << (l.kind == GenLetter::Kind::Adj ? "*" : "") << ':' << l.i + 1 << ':' << l.j + 1;
  return os.str();
}

GenLetter parse_letter(const std::string& label, char symbol, std::size_t n) {
  if (label == "1") return {};
  GenLetter l;
  std::size_t pos = 0;
  if (label.size() < 5 || label[0] != symbol) throw InvalidInput("bad generator label '" + label + "'");
  pos = 1;
  l.kind = GenLetter::Kind::Gen;
  if (label[pos] == '*') {
    l.kind = GenLetter::Kind::Adj;
    ++pos;
  }
  unsigned long i = 0;
  unsigned long j = 0;
  char c1 = 0;
  char c2 = 0;
  std::istringstream is(label.substr(pos));
  if (!(is >> c1 >> i >> c2 >> j) || c1 != ':' || c2 != ':' || !is.eof() || i < 1 || j < 1 ||
      i > n || j > n) {
    throw InvalidInput("bad generator label '" + label + "'");
  }
  l.i = i - 1;
  l.j = j - 1;
  return l;
}

// ---------------------------------------------------------------- index

GeneratorIndex::GeneratorIndex(std::size_t n1, std::size_t n2) : n1_(n1), n2_(n2) {
  if (n1 < 1 || n2 < 1) throw InvalidInput("GeneratorIndex: n1, n2 must be >= 1");
}

std::size_t GeneratorIndex::letter_position(const GenLetter& l, std::size_t n) {
  switch (l.kind) {
    case GenLetter::Kind::One: return 0;
    case GenLetter::Kind::Gen: return 1 + l.i * n + l.j;
    case GenLetter::Kind::Adj: return 1 + n * n + l.i * n + l.j;
  }
  return 0;
}

GenLetter GeneratorIndex::letter_at(std::size_t pos, std::size_t n) {
  if (pos == 0) return {};
  --pos;
  if (pos < n * n) return {GenLetter::Kind::Gen, pos / n, pos % n};
  pos -= n * n;
  return {GenLetter::Kind::Adj, pos / n, pos % n};
}

std::size_t GeneratorIndex::position(const GenLetter& x, const GenLetter& y) const {
  return letter_position(x, n1_) * y_count() + letter_position(y, n2_);
}

CorrelationTuple::CorrelationTuple(std::size_t n1, std::size_t n2)
    : index(n1, n2), values(index.size()) {}

TupleInvariantReport check_tuple(const CorrelationTuple& t) {
  TupleInvariantReport r;
  const GeneratorIndex& idx = t.index;
  if (t.values.size() != idx.size()) throw InvalidInput("tuple length does not match index");
  r.unit_error = std::abs(t.at({}, {}) - 1.0);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const GenLetter x = idx.x_at(k);
    const GenLetter y = idx.y_at(k);
    r.conjugate_error =
        std::max(r.conjugate_error, std::abs(t.at(x.star(), y.star()) - std::conj(t.values[k])));
    r.max_abs = std::max(r.max_abs, std::abs(t.values[k]));
  }
  return r;
}

// ---------------------------------------------------------------- sampling

namespace {

Matrix factor_operator(const Matrix& u, std::size_t n, const GenLetter& l) {
  const std::size_t d = u.rows() / n;
  switch (l.kind) {
    case GenLetter::Kind::One: return Matrix::identity(d);
    case GenLetter::Kind::Gen: return u.block(l.i * d, l.j * d, d, d);
    case GenLetter::Kind::Adj: return u.block(l.i * d, l.j * d, d, d).adjoint();
  }
  return {};
}

cplx expectation(const Matrix& op, const std::vector<cplx>& xi) {
  cplx acc = 0.0;
  for (std::size_t a = 0; a < op.rows(); ++a) {
    cplx row = 0.0;
    for (std::size_t b = 0; b < op.cols(); ++b) row += op(a, b) * xi[b];
    acc += std::conj(xi[a]) * row;
  }
  return acc;
}

std::vector<cplx> apply_op(const Matrix& op, const std::vector<cplx>& xi) {
  std::vector<cplx> out(op.rows());
  for (std::size_t a = 0; a < op.rows(); ++a)
    for (std::size_t b = 0; b < op.cols(); ++b) out[a] += op(a, b) * xi[b];
  return out;
}

void require_model_shapes(std::size_t n1, std::size_t n2, const Matrix& u, const Matrix& v,
                          const std::vector<cplx>& xi) {
  if (!u.square() || u.rows() % n1 != 0 || !v.square() || v.rows() % n2 != 0)
    throw DimensionError("tensor model: U, V must be (n d) x (n d)");
  if (xi.size() != (u.rows() / n1) * (v.rows() / n2))
    throw DimensionError("tensor model: state dimension must be dA * dB");
}

}  // namespace

CorrelationTuple tensor_correlation(std::size_t n1, std::size_t n2, const Matrix& u,
                                    const Matrix& v, const std::vector<cplx>& xi) {
  require_model_shapes(n1, n2, u, v, xi);
  CorrelationTuple t(n1, n2);
  const GeneratorIndex& idx = t.index;
  std::vector<Matrix> xs;
  std::vector<Matrix> ys;
  for (std::size_t a = 0; a < idx.x_count(); ++a)
    xs.push_back(factor_operator(u, n1, GeneratorIndex::letter_at(a, n1)));
  for (std::size_t b = 0; b < idx.y_count(); ++b)
    ys.push_back(factor_operator(v, n2, GeneratorIndex::letter_at(b, n2)));
  for (std::size_t a = 0; a < idx.x_count(); ++a)
    for (std::size_t b = 0; b < idx.y_count(); ++b)
      t.values[a * idx.y_count() + b] = expectation(kron(xs[a], ys[b]), xi);
  t.values[0] = 1.0;
  return t;
}

CorrelationTuple sample_ucq(std::size_t n1, std::size_t n2, std::size_t da, std::size_t db,
                            Rng& rng, bool identity_override) {
  if (n1 < 1 || n2 < 1 || da < 1 || db < 1) throw InvalidInput("sample_ucq: counts must be >= 1");
  Matrix u = random_unitary(n1 * da, rng);
  Matrix v = random_unitary(n2 * db, rng);
  if (identity_override) {
    u = Matrix::identity(n1 * da);
    v = Matrix::identity(n2 * db);
  }
  const std::vector<cplx> xi = random_unit_vector(da * db, rng);
  return tensor_correlation(n1, n2, u, v, xi);
}

CorrelationTuple tuple_convex_combine(const CorrelationTuple& t1, const CorrelationTuple& t2,
                                      double w) {
  if (!(t1.index == t2.index)) throw InvalidInput("tuple_convex_combine: index mismatch");
  if (t1.values.size() != t2.values.size()) throw InvalidInput("tuple_convex_combine: length");
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("tuple_convex_combine: w outside [0, 1]");
  CorrelationTuple out = t1;
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] = w * t1.values[k] + (1.0 - w) * t2.values[k];
  return out;
}

CorrelationTuple conjugate_relabel(const CorrelationTuple& t) {
  CorrelationTuple out = t;
  for (std::size_t k = 0; k < t.values.size(); ++k) {
    const GenLetter x = t.index.x_at(k);
    const GenLetter y = t.index.y_at(k);
    out.values[k] = std::conj(t.at(x.star(), y.star()));
  }
  return out;
}

// ---------------------------------------------------------------- moments

std::size_t MomentLayout::of(const GenLetter& l, bool first) const {
  switch (l.kind) {
    case GenLetter::Kind::One: return 0;
    case GenLetter::Kind::Gen: return first ? u(l.i, l.j) : v(l.i, l.j);
    case GenLetter::Kind::Adj: return first ? u_adj(l.i, l.j) : v_adj(l.i, l.j);
  }
  return 0;
}

MomentMatrix moment_matrix_of(std::size_t n1, std::size_t n2, const Matrix& u, const Matrix& v,
                              const std::vector<cplx>& xi) {
  require_model_shapes(n1, n2, u, v, xi);
  const std::size_t da = u.rows() / n1;
  const std::size_t db = v.rows() / n2;
  const MomentLayout lay(n1, n2);
  std::vector<std::vector<cplx>> vecs(lay.size());
  vecs[0] = xi;
  for (std::size_t pos = 1; pos < 2 * n1 * n1 + 1; ++pos) {
    const GenLetter l = GeneratorIndex::letter_at(pos, n1);
    vecs[lay.of(l, true)] = apply_op(kron(factor_operator(u, n1, l), Matrix::identity(db)), xi);
  }
  for (std::size_t pos = 1; pos < 2 * n2 * n2 + 1; ++pos) {
    const GenLetter l = GeneratorIndex::letter_at(pos, n2);
    vecs[lay.of(l, false)] = apply_op(kron(Matrix::identity(da), factor_operator(v, n2, l)), xi);
  }
  MomentMatrix mm{n1, n2, Matrix(lay.size(), lay.size())};
  for (std::size_t a = 0; a < lay.size(); ++a)
    for (std::size_t b = 0; b < lay.size(); ++b) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < xi.size(); ++k) acc += std::conj(vecs[a][k]) * vecs[b][k];
      mm.m(a, b) = acc;
    }
  return mm;
}

namespace {

// Entries of the moment matrix pinned by the tuple, upper triangle only.
struct FixedEntry {
  std::size_t row;
  std::size_t col;
  cplx value;
};

std::vector<FixedEntry> fixed_entries(const CorrelationTuple& t) {
  const std::size_t n1 = t.index.n1();
  const std::size_t n2 = t.index.n2();
  const MomentLayout lay(n1, n2);
  std::vector<FixedEntry> out;
  out.push_back({0, 0, 1.0});
  for (std::size_t a = 1; a < t.index.x_count(); ++a) {
    const GenLetter x = GeneratorIndex::letter_at(a, n1);
    out.push_back({0, lay.of(x, true), t.at(x, {})});
  }
  for (std::size_t b = 1; b < t.index.y_count(); ++b) {
    const GenLetter y = GeneratorIndex::letter_at(b, n2);
    out.push_back({0, lay.of(y, false), t.at({}, y)});
  }
  // M[x*, y] = s(x y) for x in the first factor and y in the second.
  for (std::size_t a = 1; a < t.index.x_count(); ++a) {
    const GenLetter x = GeneratorIndex::letter_at(a, n1);
    for (std::size_t b = 1; b < t.index.y_count(); ++b) {
      const GenLetter y = GeneratorIndex::letter_at(b, n2);
      out.push_back({lay.of(x.star(), true), lay.of(y, false), t.at(x, y)});
    }
  }
  return out;
}

// Σ_k M[g_ki, g_kj] = δ_ij  and  Σ_k M[g*_ik, g*_jk] = δ_ij for one factor.
template <typename Fn>
void for_each_unitarity_constraint(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      fn(i, j, false);
      fn(i, j, true);
    }
}

struct UnitarityBlock {
  std::size_t n;
  std::size_t gen_base;  // row of g_00
  std::size_t adj_base;  // row of g*_00

  std::size_t row(std::size_t k, std::size_t i, std::size_t /*j*/, bool adj) const {
    // Column sums pair g_ki with g_kj; row sums pair g*_ik with g*_jk.
    return adj ? adj_base + i * n + k : gen_base + k * n + i;
  }
  std::size_t col(std::size_t k, std::size_t /*i*/, std::size_t j, bool adj) const {
    return adj ? adj_base + j * n + k : gen_base + k * n + j;
  }
};

std::vector<UnitarityBlock> unitarity_blocks(const MomentLayout& lay, std::size_t n1,
                                             std::size_t n2) {
  return {{n1, lay.u(0, 0), lay.u_adj(0, 0)}, {n2, lay.v(0, 0), lay.v_adj(0, 0)}};
}

void project_affine(Matrix& m, const std::vector<FixedEntry>& fixed,
                    const std::vector<UnitarityBlock>& blocks) {
  m = hermitian_part(m);
  for (const auto& e : fixed) {
    m(e.row, e.col) = e.value;
    m(e.col, e.row) = std::conj(e.value);
  }
  for (const auto& blk : blocks) {
    for_each_unitarity_constraint(blk.n, [&](std::size_t i, std::size_t j, bool adj) {
      cplx sum = 0.0;
      for (std::size_t k = 0; k < blk.n; ++k) sum += m(blk.row(k, i, j, adj), blk.col(k, i, j, adj));
      const cplx shift = (sum - (i == j ? 1.0 : 0.0)) / static_cast<double>(blk.n);
      for (std::size_t k = 0; k < blk.n; ++k) {
        const std::size_t r = blk.row(k, i, j, adj);
        const std::size_t c = blk.col(k, i, j, adj);
        if (r == c) {
          m(r, c) -= shift.real();
        } else {
          m(r, c) -= shift;
          m(c, r) = std::conj(m(r, c));
        }
      }
    });
  }
}

// Closed-form necessary conditions: Hermitian data, unit normalization, and
// Schur-complement budgets implied by the unitarity sums.
std::optional<std::string> necessary_condition_failure(const CorrelationTuple& t, double tol) {
  const TupleInvariantReport inv = check_tuple(t);
  if (inv.unit_error > tol) return "t(1,1) != 1";
  if (inv.conjugate_error > tol) return "t(x*,y*) != conj t(x,y)";

  const std::size_t n1 = t.index.n1();
  const std::size_t n2 = t.index.n2();
  auto over = [&](double budget) { return budget > 1.0 + tol; };

  std::vector<GenLetter> ys{{}};
  for (std::size_t b = 1; b < t.index.y_count(); ++b) ys.push_back(GeneratorIndex::letter_at(b, n2));
  std::vector<GenLetter> xs{{}};
  for (std::size_t a = 1; a < t.index.x_count(); ++a) xs.push_back(GeneratorIndex::letter_at(a, n1));

  using K = GenLetter::Kind;
  // Rows of (t(u_ij, y))_j and columns of (t(u*_ij, y))_i for every y.
  for (const GenLetter& y : ys) {
    for (std::size_t i = 0; i < n1; ++i) {
      double row = 0.0;
      double col = 0.0;
      for (std::size_t j = 0; j < n1; ++j) {
        row += std::norm(t.at({K::Gen, i, j}, y));
        col += std::norm(t.at({K::Adj, j, i}, y));
      }
      if (over(row) || over(col)) {
        return "unitarity budget exceeded at first factor index " + std::to_string(i + 1) +
               " with y = " + letter_label(y, 'v');
      }
    }
  }
  for (const GenLetter& x : xs) {
    for (std::size_t k = 0; k < n2; ++k) {
      double row = 0.0;
      double col = 0.0;
      for (std::size_t l = 0; l < n2; ++l) {
        row += std::norm(t.at(x, {K::Gen, k, l}));
        col += std::norm(t.at(x, {K::Adj, l, k}));
      }
      if (over(row) || over(col)) {
        return "unitarity budget exceeded at second factor index " + std::to_string(k + 1) +
               " with x = " + letter_label(x, 'u');
      }
    }
  }
  // Column budgets of single letters: Σ_i |s(u_ij)|² ≤ Σ_i M[u_ij,u_ij] = 1.
  for (std::size_t j = 0; j < n1; ++j) {
    double col = 0.0;
    double row = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
      col += std::norm(t.at({K::Gen, i, j}, {}));
      row += std::norm(t.at({K::Adj, j, i}, {}));
    }
    if (over(col) || over(row)) return "unitarity budget exceeded for single letters of u";
  }
  for (std::size_t l = 0; l < n2; ++l) {
    double col = 0.0;
    double row = 0.0;
    for (std::size_t k = 0; k < n2; ++k) {
      col += std::norm(t.at({}, {K::Gen, k, l}));
      row += std::norm(t.at({}, {K::Adj, l, k}));
    }
    if (over(col) || over(row)) return "unitarity budget exceeded for single letters of v";
  }
  return std::nullopt;
}

}  // namespace

MomentCheck check_moment_matrix(const MomentMatrix& mm, const CorrelationTuple& t) {
  const std::size_t n1 = t.index.n1();
  const std::size_t n2 = t.index.n2();
  const MomentLayout lay(n1, n2);
  if (mm.m.rows() != lay.size() || mm.m.cols() != lay.size())
    throw DimensionError("moment matrix has the wrong size");
  MomentCheck c;
  c.hermitian_defect = hermitian_defect(mm.m);
  c.unit_error = std::abs(mm.m(0, 0) - 1.0);
  c.lambda_min = lambda_min(mm.m);
  for (const auto& e : fixed_entries(t)) {
    c.data_error = std::max(c.data_error, std::abs(mm.m(e.row, e.col) - e.value));
    c.data_error = std::max(c.data_error, std::abs(mm.m(e.col, e.row) - std::conj(e.value)));
  }
  for (const auto& blk : unitarity_blocks(lay, n1, n2)) {
    for (std::size_t i = 0; i < blk.n; ++i)
      for (std::size_t j = 0; j < blk.n; ++j)
        for (bool adj : {false, true}) {
          cplx sum = 0.0;
          for (std::size_t k = 0; k < blk.n; ++k) sum += mm.m(blk.row(k, i, j, adj), blk.col(k, i, j, adj));
          c.unitarity_error = std::max(c.unitarity_error, std::abs(sum - (i == j ? 1.0 : 0.0)));
        }
  }
  return c;
}

const char* to_string(NpaVerdict v) {
  switch (v) {
    case NpaVerdict::Feasible: return "FEASIBLE";
    case NpaVerdict::InfeasibleEvidence: return "INFEASIBLE_EVIDENCE";
    case NpaVerdict::Undetermined: return "UNDETERMINED";
  }
  return "?";
}

NpaResult npa_check(const CorrelationTuple& t, const NpaConfig& cfg) {
  if (t.values.size() != t.index.size()) throw InvalidInput("npa_check: malformed tuple");
  for (const auto& z : t.values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidInput("npa_check: non-finite tuple value");

  NpaResult res;
  if (auto why = necessary_condition_failure(t, cfg.condition_tol)) {
    res.verdict = NpaVerdict::InfeasibleEvidence;
    res.reason = *why;
    return res;
  }

  const std::size_t n1 = t.index.n1();
  const std::size_t n2 = t.index.n2();
  const MomentLayout lay(n1, n2);
  const auto fixed = fixed_entries(t);
  const auto blocks = unitarity_blocks(lay, n1, n2);
  const AffineProjection affine = [&](const Matrix& m) {
    Matrix out = m;
    project_affine(out, fixed, blocks);
    return out;
  };

  Matrix start = Matrix::identity(lay.size());
  for (const auto& blk : blocks)
    for (std::size_t k = 0; k < 2 * blk.n * blk.n; ++k)
      start(blk.gen_base + k, blk.gen_base + k) = 1.0 / static_cast<double>(blk.n);
  start = affine(start);

  const ProjectionResult dr = douglas_rachford_psd(start, affine, cfg.max_iter, cfg.residual_tol);
  res.iterations = dr.iterations;
  res.residual = dr.gap;
  if (dr.converged) {
    MomentMatrix mm{n1, n2, dr.affine_iterate};
    if (check_moment_matrix(mm, t).ok()) {
      res.verdict = NpaVerdict::Feasible;
      res.moment = std::move(mm);
      return res;
    }
  }
  res.verdict = NpaVerdict::Undetermined;
  return res;
}

}  // namespace unclab
