#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "unclab/cones.hpp"
#include "unclab/correlations.hpp"
#include "unclab/json_io.hpp"

namespace unclab::cli {

/// Every tunable the subcommands use. Loaded from an optional JSON config
/// file, then overridden field by field from command-line flags.
struct RunConfig {
  double eps = 1e-6;
  std::size_t max_iter = 50000;
  std::optional<std::size_t> r_max;  // unset: 2n
  std::size_t starts = 32;
  std::size_t max_steps = 2000;
  std::uint64_t seed = 1;
  double residual_tol = 1e-9;
  double grad_tol = 1e-9;
  double tol_violation = 1e-7;
  double condition_tol = 1e-9;

  /// Throws InvalidInput unless eps ≥ 0 and every other field is positive.
  void validate() const;

  SolverConfig solver() const;
  NpaConfig npa() const;

  bool operator==(const RunConfig&) const = default;
};

Json to_json(const RunConfig& c);
/// Fields absent from `j` keep the values already in `base`; unknown keys are rejected.
RunConfig run_config_from_json(const Json& j, RunConfig base = {});
RunConfig load_run_config(const std::string& path);

}  // namespace unclab::cli
