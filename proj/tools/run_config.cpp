#include "run_config.hpp"

#include <fstream>
#include <set>

namespace unclab::cli {

namespace {

const std::set<std::string> kKeys = {"eps",       "max_iter",     "r_max",    "starts",
                                     "max_steps", "seed",         "residual_tol", "grad_tol",
                                     "tol_violation", "condition_tol"};

std::size_t positive_count(const Json& v, const std::string& key) {
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
    throw InvalidInput("config: '" + key + "' must be a positive integer");
  return v.get<std::size_t>();
}

double number(const Json& v, const std::string& key) {
  if (!v.is_number()) throw InvalidInput("config: '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

void RunConfig::validate() const {
  if (!(eps >= 0.0)) throw InvalidInput("config: eps must be >= 0");
  if (max_iter == 0 || starts == 0 || max_steps == 0 || (r_max && *r_max == 0))
    throw InvalidInput("config: counts must be positive");
  for (double t : {residual_tol, grad_tol, tol_violation, condition_tol})
    if (!(t > 0.0)) throw InvalidInput("config: tolerances must be positive");
}

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.eps = eps;
  s.max_iter = max_iter;
  s.r_max = r_max.value_or(0);
  s.starts = starts;
  s.max_steps = max_steps;
  s.residual_tol = residual_tol;
  s.grad_tol = grad_tol;
  s.tol_violation = tol_violation;
  return s;
}

NpaConfig RunConfig::npa() const {
  return NpaConfig{max_iter, residual_tol, condition_tol};
}

Json to_json(const RunConfig& c) {
  Json j{{"eps", c.eps}, {"max_iter", c.max_iter}};
  j["r_max"] = c.r_max ? Json(*c.r_max) : Json(nullptr);
  j["starts"] = c.starts;
  j["max_steps"] = c.max_steps;
  j["seed"] = c.seed;
  j["residual_tol"] = c.residual_tol;
  j["grad_tol"] = c.grad_tol;
  j["tol_violation"] = c.tol_violation;
  j["condition_tol"] = c.condition_tol;
  return j;
}

RunConfig run_config_from_json(const Json& j, RunConfig c) {
  if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (!kKeys.count(key)) throw InvalidInput("config: unknown key '" + key + "'");
    if (key == "eps") c.eps = number(v, key);
    else if (key == "max_iter") c.max_iter = positive_count(v, key);
    else if (key == "r_max") c.r_max = v.is_null() ? std::nullopt : std::optional(positive_count(v, key));
    else if (key == "starts") c.starts = positive_count(v, key);
    else if (key == "max_steps") c.max_steps = positive_count(v, key);
    else if (key == "seed") {
      if (!v.is_number_unsigned()) throw InvalidInput("config: 'seed' must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    }
    else if (key == "residual_tol") c.residual_tol = number(v, key);
    else if (key == "grad_tol") c.grad_tol = number(v, key);
    else if (key == "tol_violation") c.tol_violation = number(v, key);
    else if (key == "condition_tol") c.condition_tol = number(v, key);
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("config: cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("config: " + std::string(e.what()));
  }
  return run_config_from_json(j);
}

}  // namespace unclab::cli
