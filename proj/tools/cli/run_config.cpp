#include "run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>
#include <vector>

namespace npg::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& section, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  if (!section.is_object()) {
    throw ContractViolation("config: '" + std::string(where) +
                            "' must be an object");
  }
  for (const auto& [key, value] : section.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) {
      throw ContractViolation("config: unknown key '" + std::string(where) +
                              "." + key + "'");
    }
  }
}

template <typename T>
void read(const json& section, const char* key, T& out) {
  if (!section.contains(key)) return;
  try {
    out = section.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("config: bad value for '") + key +
                            "': " + e.what());
  }
}

}  // namespace

RunConfig apply_json(RunConfig base, const json& doc) {
  reject_unknown(doc, "<root>", {"problem", "solver", "output"});

  if (doc.contains("problem")) {
    const auto& p = doc.at("problem");
    reject_unknown(p, "problem", {"kind", "seed", "m", "n", "lam", "center"});
    std::string kind = problems::to_string(base.problem.kind);
    read(p, "kind", kind);
    base.problem.kind = problems::parse_problem_kind(kind);
    read(p, "seed", base.problem.seed);
    read(p, "m", base.problem.rows);
    read(p, "n", base.problem.cols);
    read(p, "lam", base.problem.lam);
    if (p.contains("center")) {
      std::vector<double> center;
      read(p, "center", center);
      base.problem.center = std::move(center);
    }
  }

  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    reject_unknown(s, "solver",
                   {"variant", "tau", "gamma_min", "gamma_max", "delta", "p_min",
                    "m", "step_init", "tol", "max_iter", "mu_diag"});
    auto& c = base.solver;
    std::string variant = to_string(c.variant);
    std::string step_init = to_string(c.step_init);
    read(s, "variant", variant);
    read(s, "step_init", step_init);
    c.variant = parse_variant(variant);
    c.step_init = parse_step_init(step_init);
    read(s, "tau", c.tau);
    read(s, "gamma_min", c.gamma_min);
    read(s, "gamma_max", c.gamma_max);
    read(s, "delta", c.delta);
    read(s, "p_min", c.p_min);
    read(s, "m", c.m);
    read(s, "tol", c.tol);
    read(s, "max_iter", c.max_iter);
    if (s.contains("mu_diag")) {
      const auto& mu = s.at("mu_diag");
      if (mu.is_string() && mu.get<std::string>() == "auto") {
        c.mu_diag.reset();
      } else if (mu.is_number()) {
        c.mu_diag = mu.get<double>();
      } else {
        throw ContractViolation("config: mu_diag must be a number or \"auto\"");
      }
    }
  }

  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    reject_unknown(o, "output", {"csv_path", "json_path"});
    read(o, "csv_path", base.csv_path);
    read(o, "json_path", base.json_path);
  }
  return base;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ContractViolation("config: " + path + ": " + e.what());
  }
  return apply_json(std::move(base), doc);
}

json to_json(const RunConfig& config) {
  const auto& p = config.problem;
  const auto& s = config.solver;
  json problem = {{"kind", problems::to_string(p.kind)},
                  {"seed", p.seed},
                  {"m", p.rows},
                  {"n", p.cols},
                  {"lam", p.lam}};
  if (p.center) problem["center"] = *p.center;
  json solver = {{"variant", to_string(s.variant)},
                 {"tau", s.tau},
                 {"gamma_min", s.gamma_min},
                 {"gamma_max", s.gamma_max},
                 {"delta", s.delta},
                 {"p_min", s.p_min},
                 {"m", s.m},
                 {"step_init", to_string(s.step_init)},
                 {"tol", s.tol},
                 {"max_iter", s.max_iter},
                 {"mu_diag", s.resolved_mu()}};
  json output = {{"csv_path", config.csv_path}, {"json_path", config.json_path}};
  return {{"problem", problem}, {"solver", solver}, {"output", output}};
}

}  // namespace npg::cli
