// Acceptance suite: one line per criterion, nonzero exit if any criterion fails.
//
//   acceptance [--artifacts DIR]
//
// With --artifacts, the JSON artifacts of both determinism runs are written to
// DIR/run1.json and DIR/run2.json.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "unclab/cones.hpp"
#include "unclab/correlations.hpp"
#include "unclab/dilation.hpp"
#include "unclab/json_io.hpp"

using namespace unclab;

namespace {

constexpr std::uint64_t kMasterSeed = 20240601;

// FNV-1a over raw bytes; used to fingerprint every computed object.
class Digest {
 public:
  void add(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001B3ULL;
    }
  }
  void add(const Matrix& m) { add(m.data().data(), m.data().size() * sizeof(cplx)); }
  void add(double v) { add(&v, sizeof v); }
  void add(const std::string& s) { add(s.data(), s.size()); }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  std::uint64_t h_ = 0xCBF29CE484222325ULL;
};

struct Outcome {
  bool pass = true;
  std::string detail;
  Json artifact;
  double seconds = 0.0;
  double limit = 0.0;  // seconds; 0 means no limit of its own
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Rng criterion_rng(std::uint64_t criterion) { return Rng(Rng::derive_seed(kMasterSeed, criterion)); }

// ---------------------------------------------------------------- 1

Outcome dilation_soundness() {
  Outcome o;
  o.limit = 30.0;
  Rng rng = criterion_rng(1);
  Digest dg;
  double worst = 0.0;
  std::size_t corner_mismatch = 0;
  constexpr std::size_t kTrials = 10000;
  for (std::size_t t = 0; t < kTrials; ++t) {
    const std::size_t k = 1 + t % 16;
    const Matrix c = random_contraction(k, 1, rng);
    const Matrix v = unitary_dilation(c);
    worst = std::max(worst, frobenius_norm(v.adjoint() * v - Matrix::identity(2 * k)));
    if (!(v.block(0, 0, k, k) == c)) ++corner_mismatch;
    dg.add(v);
  }
  if (worst > 1e-9) fail(o, "unitarity residual " + fmt("%.3e", worst));
  if (corner_mismatch) fail(o, std::to_string(corner_mismatch) + " corner mismatches");
  if (o.pass) o.detail = "10000 contractions up to 16x16, max ||V*V-I||_F " + fmt("%.2e", worst);
  o.artifact = {{"trials", kTrials}, {"max_residual", worst}, {"corner_mismatch", corner_mismatch},
                {"digest", dg.hex()}};
  return o;
}

// ---------------------------------------------------------------- 2

Outcome choi_positivity() {
  Outcome o;
  o.limit = 5.0;
  Rng rng = criterion_rng(2);
  Digest dg;
  double worst = 1.0;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t k = 0; k < 20; ++k) {
      const std::size_t d = 1 + k % 3;
      const double lam = lambda_min(choi_of_phi(n, random_unitary(n * d, rng)));
      worst = std::min(worst, lam);
      dg.add(lam);
    }
  }
  if (worst < -1e-10) fail(o, "lambda_min " + fmt("%.3e", worst));
  if (o.pass) o.detail = "60 Choi matrices (n = 2, 3, 4), min eigenvalue " + fmt("%.2e", worst);
  o.artifact = {{"min_lambda", worst}, {"digest", dg.hex()}};
  return o;
}

// ---------------------------------------------------------------- 3 and 4

struct ConeOutcomes {
  Outcome oracle;
  Outcome exclusion;
};

ConeOutcomes cone_oracle_and_exclusion() {
  ConeOutcomes out;
  Outcome& o3 = out.oracle;
  Outcome& o4 = out.exclusion;
  o3.limit = 600.0;
  Rng rng = criterion_rng(3);
  Digest dg3;
  Digest dg4;

  SolverConfig cfg;  // defaults: eps 1e-6, r_max 2n, 32 starts
  std::size_t recert_fail = 0;
  std::size_t violated = 0;
  std::size_t both = 0;
  std::size_t inconsistent = 0;
  std::size_t unsound = 0;
  std::size_t counts[3] = {0, 0, 0};

  auto classify_checked = [&](const VnElement& x, Rng& r) {
    try {
      const ConeVerdict v = classify(x, cfg, r);
      if (v.completion && v.violation) ++both;
      if (v.completion && !verify_completion(x, *v.completion).ok()) ++unsound;
      if (v.violation && !verify_violation(x, *v.violation).ok(v.violation->lambda_min)) ++unsound;
      ++counts[static_cast<int>(v.status)];
      dg4.add(std::string(to_string(v.status)));
      if (v.completion) dg4.add(v.completion->r);
      if (v.violation) dg4.add(v.violation->c);
    } catch (const InternalInconsistency&) {
      ++inconsistent;
    }
  };

  std::vector<VnElement> completion_elements;
  for (std::size_t t = 0; t < 200; ++t) {
    Rng trial(Rng::derive_seed(rng.seed(), t));
    const std::size_t p = 1 + t % 2;
    VnElement x = random_completion_element(2, p, trial);
    const auto cert = max_membership(x, 1e-9, 50000);
    if (!cert || !verify_completion(x, *cert).ok()) ++recert_fail;
    if (cert) dg3.add(cert->r);
    const auto viol = min_violation_search(x, 4, 16, trial);
    if (viol) ++violated;
    completion_elements.push_back(std::move(x));
  }
  if (recert_fail) fail(o3, std::to_string(recert_fail) + " elements not re-certified");
  if (violated) fail(o3, std::to_string(violated) + " elements with lambda_min below -1e-7");
  if (o3.pass) o3.detail = "200 completion elements re-certified at eps 1e-9, no violation found";
  o3.artifact = {{"elements", 200}, {"recertify_failures", recert_fail},
                 {"violations", violated}, {"digest", dg3.hex()}};

  for (std::size_t t = 0; t < 200; ++t) {
    Rng trial(Rng::derive_seed(rng.seed(), 1000 + t));
    classify_checked(completion_elements[t], trial);
  }
  for (std::size_t t = 0; t < 200; ++t) {
    Rng trial(Rng::derive_seed(rng.seed(), 2000 + t));
    classify_checked(random_hermitian_element(2, 1 + t % 2, trial), trial);
  }
  if (both || inconsistent) fail(o4, std::to_string(both + inconsistent) + " elements with both certificates");
  if (unsound) fail(o4, std::to_string(unsound) + " certificates failed re-verification");
  if (o4.pass) {
    o4.detail = "400 classified: " + std::to_string(counts[0]) + " IN_MAX, " +
                std::to_string(counts[1]) + " VIOLATED_MIN, " + std::to_string(counts[2]) +
                " UNDETERMINED, 0 inconsistencies";
  }
  o4.artifact = {{"IN_MAX", counts[0]}, {"VIOLATED_MIN", counts[1]}, {"UNDETERMINED", counts[2]},
                 {"inconsistencies", both + inconsistent}, {"unsound", unsound},
                 {"digest", dg4.hex()}};
  return out;
}

// ---------------------------------------------------------------- 5

Outcome hand_violation() {
  Outcome o;
  o.limit = 5.0;
  Rng rng = criterion_rng(5);
  VnElement x = VnElement::scalar(2, Matrix::identity(1));
  Matrix coeff(1, 1);
  coeff(0, 0) = -2.5;
  x.set_hermitian_pair(1, 3, coeff);
  const ConeVerdict v = classify(x, SolverConfig{}, rng);
  if (v.status != ConeStatus::ViolatedMin || !v.violation) {
    fail(o, std::string("status ") + to_string(v.status));
    o.artifact = {{"status", to_string(v.status)}};
    return o;
  }
  const double lam = v.violation->lambda_min;
  if (lam > -0.24) fail(o, "lambda_min " + fmt("%.6f", lam));
  if (!verify_violation(x, *v.violation).ok(lam)) fail(o, "certificate failed re-verification");
  if (o.pass) o.detail = "VIOLATED_MIN with lambda_min " + fmt("%.6f", lam) + " (analytic -0.25)";
  o.artifact = {{"status", to_string(v.status)}, {"lambda_min", lam}, {"certificate", to_json(*v.violation)}};
  return o;
}

// ---------------------------------------------------------------- 6

// s(x) for the functional s(1) = 1, s(u_ij) = S_ij on a p = 1 element.
double functional_value(const Matrix& s, const VnElement& x) {
  const std::size_t n = x.n();
  cplx value = x.a11()(0, 0);
  for (const auto& [i, j] : LambdaIndex(n).plus) {
    const cplx sij = s(i - 1, j - n - 1);
    value += (sij * x.at(i, j)(0, 0) + std::conj(sij) * x.at(j, i)(0, 0)) / (2.0 * n);
  }
  return value.real();
}

Outcome state_characterization() {
  Outcome o;
  o.limit = 120.0;
  Rng rng = criterion_rng(6);
  Digest dg;
  std::size_t pass_rejected = 0;
  std::size_t fail_accepted = 0;
  std::size_t pass_negative = 0;
  std::size_t fail_unwitnessed = 0;
  double min_pass_value = 1e300;
  double max_fail_value = -1e300;

  for (std::size_t t = 0; t < 500; ++t) {
    const std::size_t n = 2 + t % 3;
    const Matrix s = random_contraction(n, 1, rng);
    if (!vn_state_check(1.0, s)) ++pass_rejected;
    dg.add(s);
    if (t < 50) {
      for (int k = 0; k < 50; ++k) {
        const double val = functional_value(s, random_completion_element(n, 1, rng));
        min_pass_value = std::min(min_pass_value, val);
        if (val < -1e-8) ++pass_negative;
      }
    }
  }
  for (std::size_t t = 0; t < 500; ++t) {
    const std::size_t n = 2 + t % 3;
    Matrix s = ginibre(n, n, rng);
    const double target = 1.0 + 2.0 * (1.0 - rng.uniform());  // (1, 3]
    s *= target / operator_norm(s);
    if (vn_state_check(1.0, s)) ++fail_accepted;
    dg.add(s);
    if (t < 50) {
      // A positive element on which s is negative, certified by a completion.
      const VnElement x = negative_witness_element(s);
      const auto cert = max_membership(x, 1e-9, 50000);
      const double val = functional_value(s, x);
      max_fail_value = std::max(max_fail_value, val);
      if (!cert || !verify_completion(x, *cert).ok() || !(val < 0.0)) ++fail_unwitnessed;
      dg.add(val);
    }
  }
  if (pass_rejected) fail(o, std::to_string(pass_rejected) + " contractions rejected");
  if (fail_accepted) fail(o, std::to_string(fail_accepted) + " non-contractions accepted");
  if (pass_negative) fail(o, std::to_string(pass_negative) + " negative values in the pass group");
  if (fail_unwitnessed) fail(o, std::to_string(fail_unwitnessed) + " fail samples without a negative witness");
  if (o.pass) {
    o.detail = "500 + 500 classified correctly; pass group min s(x) " + fmt("%.3e", min_pass_value) +
               ", fail group max s(x) " + fmt("%.3e", max_fail_value);
  }
  o.artifact = {{"pass_rejected", pass_rejected}, {"fail_accepted", fail_accepted},
                {"pass_negative", pass_negative}, {"fail_unwitnessed", fail_unwitnessed},
                {"min_pass_value", min_pass_value}, {"max_fail_value", max_fail_value},
                {"digest", dg.hex()}};
  return o;
}

// ---------------------------------------------------------------- 7

Outcome correlation_containment() {
  Outcome o;
  o.limit = 300.0;
  Rng rng = criterion_rng(7);
  Digest dg;
  std::size_t invariant_fail = 0;
  std::size_t not_feasible = 0;
  std::size_t max_iterations = 0;
  for (std::size_t t = 0; t < 100; ++t) {
    const std::size_t da = 1 + t % 3;
    const std::size_t db = 1 + (t / 3) % 3;
    const CorrelationTuple tuple = sample_ucq(2, 2, da, db, rng);
    if (!check_tuple(tuple).ok()) ++invariant_fail;
    const NpaResult r = npa_check(tuple);
    if (r.verdict != NpaVerdict::Feasible || !check_moment_matrix(*r.moment, tuple).ok()) ++not_feasible;
    max_iterations = std::max(max_iterations, r.iterations);
    dg.add(dump(to_json(tuple)));
    if (r.moment) dg.add(r.moment->m);
  }

  Rng id_rng(0);
  CorrelationTuple corrupted = sample_ucq(2, 2, 1, 1, id_rng, true);
  const GenLetter u11{GenLetter::Kind::Gen, 0, 0};
  corrupted.at(u11, GenLetter{}) = 2.0;
  corrupted.at(u11.star(), GenLetter{}) = 2.0;
  const NpaResult bad = npa_check(corrupted);

  if (invariant_fail) fail(o, std::to_string(invariant_fail) + " tuples violate invariants");
  if (not_feasible) fail(o, std::to_string(not_feasible) + " tuples not FEASIBLE");
  if (bad.verdict != NpaVerdict::InfeasibleEvidence)
    fail(o, std::string("corrupted tuple is ") + to_string(bad.verdict));
  if (o.pass) {
    o.detail = "100 UC_q samples FEASIBLE (max " + std::to_string(max_iterations) +
               " iterations); corrupted tuple INFEASIBLE_EVIDENCE";
  }
  o.artifact = {{"invariant_failures", invariant_fail}, {"not_feasible", not_feasible},
                {"max_iterations", max_iterations}, {"corrupted", to_string(bad.verdict)},
                {"digest", dg.hex()}};
  return o;
}

// ---------------------------------------------------------------- 8

Outcome rfd_construction() {
  Outcome o;
  o.limit = 10.0;
  Rng rng = criterion_rng(8);
  Digest dg;
  std::size_t corner_mismatch = 0;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::vector<Matrix> w{random_unitary(4, rng), random_unitary(4, rng)};
    const Representation rep = retract_diag(w);
    const Representation full = rfd_compression(rep, 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        if (!(full.at(i, j).block(0, 0, 4, 4) == rep.at(i, j))) ++corner_mismatch;
    for (std::size_t m = 1; m <= 3; ++m) {
      const Representation part = rfd_compression(rep, m);
      worst = std::max(worst, part.unitarity_residual());
      dg.add(part.assembled());
    }
    dg.add(full.assembled());
  }
  if (corner_mismatch) fail(o, std::to_string(corner_mismatch) + " corner mismatches at m = d");
  if (worst > 1e-9) fail(o, "unitarity residual " + fmt("%.3e", worst));
  if (o.pass) o.detail = "20 representations, exact corners at m = d, max residual " + fmt("%.2e", worst);
  o.artifact = {{"corner_mismatch", corner_mismatch}, {"max_residual", worst}, {"digest", dg.hex()}};
  return o;
}

// ---------------------------------------------------------------- driver

template <class F>
auto timed(F&& f, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = f();
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct Suite {
  std::vector<std::pair<std::string, Outcome>> rows;
  Json artifacts = Json::object();
};

Suite run_suite() {
  Suite s;
  auto add = [&](const std::string& name, Outcome o, double seconds) {
    o.seconds = seconds;
    s.artifacts[name] = o.artifact;
    s.rows.emplace_back(name, std::move(o));
  };
  auto run = [&](const std::string& name, Outcome (*f)()) {
    double sec = 0.0;
    Outcome o = timed(f, sec);
    add(name, std::move(o), sec);
  };
  run("1 dilation soundness", dilation_soundness);
  run("2 choi positivity", choi_positivity);
  double sec = 0.0;
  ConeOutcomes cones = timed(cone_oracle_and_exclusion, sec);
  add("3 completion oracle", std::move(cones.oracle), sec);
  add("4 mutual exclusion", std::move(cones.exclusion), 0.0);
  run("5 hand violation", hand_violation);
  run("6 state characterization", state_characterization);
  run("7 correlation containment", correlation_containment);
  run("8 rfd construction", rfd_construction);
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  std::string artifact_dir;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--artifacts") == 0 && i + 1 < argc) {
      artifact_dir = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--artifacts DIR]\n");
      return 64;
    }
  }

  bool all = true;
  const Suite first = run_suite();
  for (const auto& [name, o] : first.rows) {
    bool ok = o.pass;
    std::string detail = o.detail;
    if (o.limit > 0.0 && o.seconds > o.limit) {
      ok = false;
      detail += "; runtime " + fmt("%.1f", o.seconds) + " s over limit";
    }
    all = all && ok;
    std::printf("[%s] %-26s %s (%.1f s%s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str(),
                o.seconds, o.limit > 0.0 ? (", limit " + fmt("%.0f", o.limit) + " s").c_str() : "");
    std::fflush(stdout);
  }

  const std::string bytes1 = first.artifacts.dump(2);
  const Suite second = run_suite();
  const std::string bytes2 = second.artifacts.dump(2);
  if (!artifact_dir.empty()) {
    write_file(artifact_dir + "/run1.json", bytes1);
    write_file(artifact_dir + "/run2.json", bytes2);
  }
  const bool same = bytes1 == bytes2;
  all = all && same;
  std::printf("[%s] %-26s %s\n", same ? "PASS" : "FAIL", "9 determinism",
              same ? ("rerun artifacts byte-identical (" + std::to_string(bytes1.size()) + " bytes)").c_str()
                   : "rerun artifacts differ");
  return all ? 0 : 1;
}
