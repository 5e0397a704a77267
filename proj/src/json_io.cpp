#include "unclab/json_io.hpp"

namespace unclab {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InvalidInput(std::string("JSON: missing field '") + key + "'");
  return j.at(key);
}

std::size_t count_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw InvalidInput(std::string("JSON: field '") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) throw InvalidInput(std::string("JSON: ") + what + " must be a number");
  return v.get<double>();
}

Json vector_to_json(const std::vector<cplx>& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

}  // namespace

Json to_json(const Matrix& m) {
  Json data = Json::array();
  for (const auto& z : m.data()) data.push_back({z.real(), z.imag()});
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const Json& j) {
  const std::size_t rows = count_field(j, "rows");
  const std::size_t cols = count_field(j, "cols");
  const Json& data = field(j, "data");
  if (!data.is_array() || data.size() != rows * cols)
    throw InvalidInput("JSON matrix: data length must equal rows * cols");
  std::vector<cplx> entries;
  entries.reserve(data.size());
  for (const auto& e : data) {
    if (!e.is_array() || e.size() != 2) throw InvalidInput("JSON matrix: entries are [re, im]");
    entries.emplace_back(number(e[0], "re"), number(e[1], "im"));
  }
  Matrix m(rows, cols, std::move(entries));
  if (!m.all_finite()) throw InvalidInput("JSON matrix: non-finite entry");
  return m;
}

Json to_json(const VnElement& x) {
  Json blocks = Json::array();
  const LambdaIndex idx(x.n());
  for (const auto& list : {idx.plus, idx.minus})
    for (const auto& [i, j] : list) blocks.push_back({{"i", i}, {"j", j}, {"block", to_json(x.at(i, j))}});
  return Json{{"n", x.n()}, {"p", x.p()}, {"A11", to_json(x.a11())}, {"A", std::move(blocks)}};
}

VnElement vn_element_from_json(const Json& j) {
  const std::size_t n = count_field(j, "n");
  const std::size_t p = count_field(j, "p");
  VnElement x(n, p);
  const Matrix a11 = matrix_from_json(field(j, "A11"));
  if (a11.rows() != p || a11.cols() != p) throw InvalidInput("VnElement JSON: A11 must be p x p");
  x.a11() = a11;
  const Json& blocks = field(j, "A");
  if (!blocks.is_array()) throw InvalidInput("VnElement JSON: A must be an array");
  for (const auto& b : blocks) {
    const std::size_t i = count_field(b, "i");
    const std::size_t jj = count_field(b, "j");
    if (!LambdaIndex::contains(n, i, jj))
      throw InvalidInput("VnElement JSON: index outside Lambda_n");
    const Matrix m = matrix_from_json(field(b, "block"));
    if (m.rows() != p || m.cols() != p) throw InvalidInput("VnElement JSON: blocks must be p x p");
    x.at(i, jj) = m;
  }
  return x;
}

Json to_json(const Representation& rep) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < rep.n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < rep.n; ++j) row.push_back(to_json(rep.at(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"n", rep.n}, {"d", rep.d}, {"blocks", std::move(rows)}};
}

Representation representation_from_json(const Json& j) {
  const std::size_t n = count_field(j, "n");
  const std::size_t d = count_field(j, "d");
  Representation rep(n, d);
  const Json& rows = field(j, "blocks");
  if (!rows.is_array() || rows.size() != n) throw InvalidInput("Representation JSON: need n rows");
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n)
      throw InvalidInput("Representation JSON: need n blocks per row");
    for (std::size_t k = 0; k < n; ++k) {
      Matrix m = matrix_from_json(rows[i][k]);
      if (m.rows() != d || m.cols() != d) throw InvalidInput("Representation JSON: blocks are d x d");
      rep.at(i, k) = std::move(m);
    }
  }
  return rep;
}

Json to_json(const CompletionCertificate& c) {
  return Json{{"kind", "completion"},
              {"n", c.n},
              {"p", c.p},
              {"eps", c.eps},
              {"affine_residual", c.affine_residual},
              {"psd_residual", c.psd_residual},
              {"iterations", c.iterations},
              {"R", to_json(c.r)}};
}

Json to_json(const ViolationCertificate& c) {
  return Json{{"kind", "violation"},
              {"n", c.n},
              {"p", c.p},
              {"r", c.r},
              {"lambda_min", c.lambda_min},
              {"C", to_json(c.c)},
              {"witness", vector_to_json(c.witness)}};
}

Json to_json(const ConeVerdict& v) {
  Json out{{"status", to_string(v.status)}, {"iterations", v.iterations}};
  if (v.completion) out["certificate"] = to_json(*v.completion);
  else if (v.violation) out["certificate"] = to_json(*v.violation);
  else out["certificate"] = nullptr;
  return out;
}

Json to_json(const CrosscheckReport& r) {
  return Json{{"n", r.n},
              {"p", r.p},
              {"trials", r.trials},
              {"seed", r.seed},
              {"IN_MAX", r.in_max},
              {"VIOLATED_MIN", r.violated_min},
              {"UNDETERMINED", r.undetermined},
              {"completion_recertified", r.completion_recertified},
              {"completion_failures", r.completion_failures},
              {"soundness_failures", r.soundness_failures},
              {"inconsistencies", r.inconsistencies}};
}

Json to_json(const CorrelationTuple& t) {
  Json values = Json::array();
  for (std::size_t k = 0; k < t.values.size(); ++k) {
    values.push_back({{"x", letter_label(t.index.x_at(k), 'u')},
                      {"y", letter_label(t.index.y_at(k), 'v')},
                      {"re", t.values[k].real()},
                      {"im", t.values[k].imag()}});
  }
  return Json{{"n1", t.index.n1()}, {"n2", t.index.n2()}, {"values", std::move(values)}};
}

CorrelationTuple tuple_from_json(const Json& j) {
  const std::size_t n1 = count_field(j, "n1");
  const std::size_t n2 = count_field(j, "n2");
  CorrelationTuple t(n1, n2);
  const Json& values = field(j, "values");
  if (!values.is_array() || values.size() != t.index.size())
    throw InvalidInput("tuple JSON: expected " + std::to_string(t.index.size()) + " values");
  std::vector<bool> seen(t.index.size(), false);
  for (const auto& v : values) {
    const GenLetter x = parse_letter(field(v, "x").get<std::string>(), 'u', n1);
    const GenLetter y = parse_letter(field(v, "y").get<std::string>(), 'v', n2);
    const std::size_t pos = t.index.position(x, y);
    if (seen[pos]) throw InvalidInput("tuple JSON: duplicate generator");
    seen[pos] = true;
    t.values[pos] = {number(field(v, "re"), "re"), number(field(v, "im"), "im")};
  }
  return t;
}

Json to_json(const NpaResult& r) {
  Json out{{"verdict", to_string(r.verdict)}, {"iterations", r.iterations}, {"residual", r.residual}};
  if (!r.reason.empty()) out["reason"] = r.reason;
  if (r.moment) out["moment_matrix"] = to_json(r.moment->m);
  return out;
}

std::string dump(const Json& j) { return j.dump(); }

}  // namespace unclab
