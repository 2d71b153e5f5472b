#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aniso_dbvp/problem.hpp"
#include "aniso_dbvp/solver.hpp"

namespace adbvp {

struct LambdaGrid {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
  bool log_spacing = false;
};

/// "LO:HI:N" or "LO:HI:N:log"; throws Error(config_error).
LambdaGrid parse_lambda_grid(const std::string& text);

struct RunSpec {
  std::optional<std::string> theorem;
  std::optional<double> c, c1, c2, c3, d;
  std::optional<double> lambda;
  std::optional<LambdaGrid> lambda_grid;
  SolverOptions solver;
  std::uint64_t seed = 0;
  int n_starts = 16;
  int sweep_n = 16;
  int n_cases = 1000;
  std::string method = "newton";  ///< newton | minimize | localized
  std::optional<std::vector<double>> solution;  ///< values on [0, T+1]
};

struct OutputSpec {
  std::string format = "json";
  std::optional<std::string> path;
};

struct ConfigDocument {
  nlohmann::ordered_json source;
  std::shared_ptr<const ProblemInstance> instance;
  RunSpec run;
  OutputSpec output;
  std::vector<std::string> warnings;
  std::string example_id;  ///< empty unless loaded from a built-in example
};

/// Throws Error(config_error), or ParseError for malformed expressions.
ConfigDocument parse_config(const nlohmann::ordered_json& doc);
ConfigDocument parse_config_text(const std::string& text);
ConfigDocument load_config_file(const std::string& path);

const std::vector<std::string>& builtin_example_ids();
/// The embedded JSON text of a built-in example; throws Error(config_error) for unknown ids.
const std::string& builtin_example_json(const std::string& id);
ConfigDocument builtin_example(const std::string& id);

/// Merges keys of the run/output sections (same names as in the file format).
void apply_overrides(ConfigDocument& doc, const nlohmann::ordered_json& overrides);

}  // namespace adbvp
