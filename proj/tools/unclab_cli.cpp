// unclab: JSON-in / JSON-out front end for the library.
//
// stdout carries JSON only (one compact document per line); diagnostics go to
// stderr. Exit codes: 0 success / IN_MAX / FEASIBLE, 1 negative verdict,
// 2 undetermined, 64 usage or input error, 70 internal inconsistency.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "run_config.hpp"
#include "unclab/dilation.hpp"

using namespace unclab;
using unclab::cli::RunConfig;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUndetermined = 2;
constexpr int kUsage = 64;
constexpr int kInternal = 70;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Batch outcome: a negative verdict outranks an undetermined one.
int combine(int a, int b) {
  if (a == kNegative || b == kNegative) return kNegative;
  if (a == kUndetermined || b == kUndetermined) return kUndetermined;
  return kOk;
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open input '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// A single JSON document (possibly pretty-printed), or one document per line.
std::vector<Json> parse_documents(const std::string& text) {
  try {
    return {Json::parse(text)};
  } catch (const Json::parse_error&) {
  }
  std::vector<Json> docs;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      docs.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw UsageError("input line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (docs.empty()) throw UsageError("input contains no JSON document");
  return docs;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot open output '" + path + "'");
    }
  }
  void write(const Json& j) {
    std::ostream& os = file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout;
    os << dump(j) << '\n';
    os.flush();
  }

 private:
  std::ofstream file_;
};

// Flags shared by the solver subcommands. Set flags override the config file.
struct SolverFlags {
  std::string config;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::size_t r_max = 0;
  std::size_t starts = 0;
  std::size_t max_iter = 0;
  CLI::Option* eps_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* r_max_opt = nullptr;
  CLI::Option* starts_opt = nullptr;
  CLI::Option* max_iter_opt = nullptr;

  void attach(CLI::App* app, bool eps_flag, bool search_flags, bool iter_flag) {
    app->add_option("--config", config, "JSON config file (flags take precedence)");
    if (eps_flag) eps_opt = app->add_option("--eps", eps, "completion slack (default 1e-6)");
    if (search_flags) {
      seed_opt = app->add_option("--seed", seed, "master seed (default 1)");
      r_max_opt = app->add_option("--r-max", r_max, "largest contraction block size (default 2n)")
                      ->check(CLI::PositiveNumber);
      starts_opt = app->add_option("--starts", starts, "random starts per block size (default 32)")
                       ->check(CLI::PositiveNumber);
    }
    if (iter_flag)
      max_iter_opt = app->add_option("--max-iter", max_iter, "solver iteration cap (default 50000)")
                         ->check(CLI::PositiveNumber);
  }

  RunConfig resolve() const {
    RunConfig c = config.empty() ? RunConfig{} : cli::load_run_config(config);
    if (eps_opt && eps_opt->count()) c.eps = eps;
    if (seed_opt && seed_opt->count()) c.seed = seed;
    if (r_max_opt && r_max_opt->count()) c.r_max = r_max;
    if (starts_opt && starts_opt->count()) c.starts = starts;
    if (max_iter_opt && max_iter_opt->count()) c.max_iter = max_iter;
    c.validate();
    return c;
  }
};

struct IoFlags {
  std::string input;
  std::string output;
  void attach(CLI::App* app, bool with_input = true) {
    if (with_input) app->add_option("--input", input, "input JSON file (default stdin)");
    app->add_option("--output", output, "output file (default stdout)");
  }
};

// ---------------------------------------------------------------- subcommands

int cmd_dilate(const IoFlags& io) {
  const auto docs = parse_documents(read_input(io.input));
  Output out(io.output);
  for (const Json& doc : docs) {
    const Matrix t = matrix_from_json(doc);
    const Matrix v = unitary_dilation(t);
    const double residual = frobenius_norm(v.adjoint() * v - Matrix::identity(v.rows()));
    out.write(Json{{"dilation", to_json(v)}, {"unitarity_residual", residual}});
  }
  return kOk;
}

int cmd_classify(const IoFlags& io, const RunConfig& cfg) {
  const auto docs = parse_documents(read_input(io.input));
  Output out(io.output);
  int code = kOk;
  for (std::size_t k = 0; k < docs.size(); ++k) {
    const VnElement x = vn_element_from_json(docs[k]);
    Rng rng(Rng::derive_seed(cfg.seed, k));
    const ConeVerdict v = classify(x, cfg.solver(), rng);
    spdlog::info("classify item {}: {} ({:.3f} s)", k, to_string(v.status), v.elapsed_seconds);
    out.write(to_json(v));
    code = combine(code, v.status == ConeStatus::InMax         ? kOk
                         : v.status == ConeStatus::ViolatedMin ? kNegative
                                                               : kUndetermined);
  }
  return code;
}

int cmd_max_cert(const IoFlags& io, const RunConfig& cfg) {
  const auto docs = parse_documents(read_input(io.input));
  Output out(io.output);
  int code = kOk;
  for (const Json& doc : docs) {
    const VnElement x = vn_element_from_json(doc);
    const auto cert = max_membership(x, cfg.eps, cfg.max_iter, cfg.residual_tol);
    Json j{{"status", cert ? "IN_MAX" : "UNDETERMINED"}};
    j["certificate"] = cert ? to_json(*cert) : Json(nullptr);
    out.write(j);
    code = combine(code, cert ? kOk : kUndetermined);
  }
  return code;
}

int cmd_min_violate(const IoFlags& io, const RunConfig& cfg) {
  const auto docs = parse_documents(read_input(io.input));
  Output out(io.output);
  int code = kOk;
  for (std::size_t k = 0; k < docs.size(); ++k) {
    const VnElement x = vn_element_from_json(docs[k]);
    Rng rng(Rng::derive_seed(cfg.seed, k));
    const std::size_t r_max = cfg.r_max.value_or(2 * x.n());
    const auto viol = min_violation_search(x, r_max, cfg.starts, rng, cfg.solver());
    Json j{{"status", viol ? "VIOLATED_MIN" : "UNDETERMINED"}};
    j["certificate"] = viol ? to_json(*viol) : Json(nullptr);
    out.write(j);
    code = combine(code, viol ? kNegative : kUndetermined);
  }
  return code;
}

int cmd_crosscheck(std::size_t n, std::size_t p, std::size_t trials, const RunConfig& cfg,
                   const IoFlags& io) {
  Rng rng(cfg.seed);
  const CrosscheckReport rep = crosscheck_cones(n, p, trials, rng, cfg.solver());
  if (rep.soundness_failures || rep.completion_failures) {
    spdlog::warn("crosscheck: {} completion elements not re-certified, {} with a violation",
                 rep.completion_failures, rep.soundness_failures);
  }
  Output(io.output).write(to_json(rep));
  return rep.inconsistencies > 0 ? kInternal : kOk;
}

int cmd_sample_ucq(std::size_t n1, std::size_t n2, std::size_t da, std::size_t db,
                   std::size_t trials, std::uint64_t seed, bool identity, const IoFlags& io) {
  Output out(io.output);
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng(Rng::derive_seed(seed, k));
    out.write(to_json(sample_ucq(n1, n2, da, db, rng, identity)));
  }
  return kOk;
}

int cmd_npa_check(const IoFlags& io, const RunConfig& cfg) {
  const auto docs = parse_documents(read_input(io.input));
  Output out(io.output);
  int code = kOk;
  for (std::size_t k = 0; k < docs.size(); ++k) {
    const CorrelationTuple t = tuple_from_json(docs[k]);
    const NpaResult r = npa_check(t, cfg.npa());
    spdlog::info("npa-check item {}: {} after {} iterations", k, to_string(r.verdict), r.iterations);
    out.write(to_json(r));
    code = combine(code, r.verdict == NpaVerdict::Feasible             ? kOk
                         : r.verdict == NpaVerdict::InfeasibleEvidence ? kNegative
                                                                       : kUndetermined);
  }
  return code;
}

int cmd_rfd_compress(const IoFlags& io, std::size_t m) {
  const auto docs = parse_documents(read_input(io.input));
  Output out(io.output);
  for (const Json& doc : docs) {
    const Representation rep = representation_from_json(doc);
    const Representation comp = rfd_compression(rep, m == 0 ? rep.d : m);
    out.write(Json{{"m", m == 0 ? rep.d : m},
                   {"representation", to_json(comp)},
                   {"unitarity_residual", comp.unitarity_residual()}});
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_logger_st("unclab");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("unclab: %l: %v");
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{"Operator-system cone tests, unitary dilations and correlation checks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");
  bool verbose = false;
  app.add_flag("--verbose", verbose, "log progress to stderr");

  IoFlags io;
  SolverFlags solver;
  int code = kOk;

  auto* dilate = app.add_subcommand("dilate", "unitary dilation of a contraction matrix");
  io.attach(dilate);

  auto* classify_cmd = app.add_subcommand("classify", "decide max/min cone membership of V_n elements");
  io.attach(classify_cmd);
  solver.attach(classify_cmd, true, true, true);

  auto* max_cert = app.add_subcommand("max-cert", "search for a positive completion certificate");
  io.attach(max_cert);
  solver.attach(max_cert, true, false, true);

  auto* min_violate = app.add_subcommand("min-violate", "search for a contraction violation witness");
  io.attach(min_violate);
  solver.attach(min_violate, false, true, false);

  std::size_t n = 2;
  std::size_t p = 1;
  std::size_t trials = 100;
  auto* crosscheck = app.add_subcommand("crosscheck", "completion/violation consistency experiment");
  io.attach(crosscheck, false);
  solver.attach(crosscheck, true, true, true);
  crosscheck->add_option("--n", n, "generator matrix size (default 2)")->check(CLI::Range(2, 64));
  crosscheck->add_option("--p", p, "coefficient block size (default 1)")->check(CLI::Range(1, 64));
  crosscheck->add_option("--trials", trials, "trials per element family (default 100)");

  std::size_t n1 = 2;
  std::size_t n2 = 2;
  std::size_t da = 1;
  std::size_t db = 1;
  std::size_t samples = 1;
  std::uint64_t sample_seed = 1;
  bool identity = false;
  auto* sample = app.add_subcommand("sample-ucq", "sample tensor-model unitary correlation tuples");
  io.attach(sample, false);
  sample->add_option("--n1", n1, "first generator matrix size (default 2)")->check(CLI::PositiveNumber);
  sample->add_option("--n2", n2, "second generator matrix size (default 2)")->check(CLI::PositiveNumber);
  sample->add_option("--da", da, "first Hilbert space dimension (default 1)")->check(CLI::PositiveNumber);
  sample->add_option("--db", db, "second Hilbert space dimension (default 1)")->check(CLI::PositiveNumber);
  sample->add_option("--trials", samples, "number of tuples, one per line (default 1)");
  sample->add_option("--seed", sample_seed, "master seed (default 1)");
  sample->add_flag("--identity", identity, "use identity unitaries");

  auto* npa = app.add_subcommand("npa-check", "level-1 moment matrix test for correlation tuples");
  io.attach(npa);
  solver.attach(npa, false, false, true);

  std::size_t m = 0;
  auto* rfd = app.add_subcommand("rfd-compress", "compress a representation and dilate it back");
  io.attach(rfd);
  rfd->add_option("--m", m, "compression dimension (default d)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, std::cerr, std::cerr);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, std::cerr, std::cerr);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kUsage;
  }
  if (verbose) spdlog::set_level(spdlog::level::info);

  try {
    if (dilate->parsed()) code = cmd_dilate(io);
    else if (classify_cmd->parsed()) code = cmd_classify(io, solver.resolve());
    else if (max_cert->parsed()) code = cmd_max_cert(io, solver.resolve());
    else if (min_violate->parsed()) code = cmd_min_violate(io, solver.resolve());
    else if (crosscheck->parsed()) code = cmd_crosscheck(n, p, trials, solver.resolve(), io);
    else if (sample->parsed()) code = cmd_sample_ucq(n1, n2, da, db, samples, sample_seed, identity, io);
    else if (npa->parsed()) code = cmd_npa_check(io, solver.resolve());
    else if (rfd->parsed()) code = cmd_rfd_compress(io, m);
  } catch (const InternalInconsistency& e) {
    spdlog::error("{}", e.what());
    return kInternal;
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {  // InvalidInput, DimensionError
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const NotContractionError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const Json::exception& e) {
    spdlog::error("malformed JSON: {}", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return kInternal;
  }
  return code;
}
