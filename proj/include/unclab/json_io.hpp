#pragma once

#include <string>

#include "json.hpp"
#include "unclab/cones.hpp"
#include "unclab/correlations.hpp"
#include "unclab/dilation.hpp"
#include "unclab/linalg.hpp"
#include "unclab/opsys.hpp"

namespace unclab {

using Json = nlohmann::ordered_json;

// Shared matrix format: {"rows": R, "cols": C, "data": [[re, im], ...]} row-major.
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

// {"n", "p", "A11", "A": [{"i", "j", "block"}, ...]} with 1-based indices over Λ_n.
Json to_json(const VnElement& x);
VnElement vn_element_from_json(const Json& j);

// {"n", "d", "blocks": [[<matrix>, ...], ...]}.
Json to_json(const Representation& rep);
Representation representation_from_json(const Json& j);

Json to_json(const CompletionCertificate& c);
Json to_json(const ViolationCertificate& c);
/// Verdict with its certificate. Wall-clock time is not serialized.
Json to_json(const ConeVerdict& v);
Json to_json(const CrosscheckReport& r);

// {"n1", "n2", "values": [{"x": "u:1:2", "y": "v*:2:1", "re", "im"}, ...]}.
Json to_json(const CorrelationTuple& t);
CorrelationTuple tuple_from_json(const Json& j);

Json to_json(const NpaResult& r);

/// Compact single-line dump with shortest round-trip doubles.
std::string dump(const Json& j);

}  // namespace unclab
