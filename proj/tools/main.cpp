#include <cstdio>
#include <cstring>
#include <memory>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aniso_dbvp/aniso_dbvp.h"

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string config_path;
  std::string example;
  std::string positional_example;
  std::optional<std::string> theorem, lambda_grid, method, format, out, solution;
  std::optional<double> lambda, c, c1, c2, c3, d, tol;
  std::optional<int> max_iter, n_starts, sweep_n, n_cases;
  std::optional<std::uint64_t> seed;
};

int print_error(const std::string& code, const std::string& message, int exit_code) {
  Json e{{"schema_version", 1}, {"error", {{"error", code}, {"message", message}, {"exit_code", exit_code}}}};
  std::cerr << e.dump(2) << "\n";
  return exit_code;
}

int print_last_error(int rc) {
  std::cerr << adbvp_last_error();
  return rc;
}

/// Accepts a bare array of values or any JSON holding them under "u" (also nested in "solution").
std::optional<Json> read_solution(const std::string& path, std::string& err) {
  std::ifstream in(path);
  if (!in) {
    err = "cannot open solution file '" + path + "'";
    return std::nullopt;
  }
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    err = std::string("solution file: ") + e.what();
    return std::nullopt;
  }
  if (j.is_object() && j.contains("solution")) j = j["solution"];
  if (j.is_object() && j.contains("u")) j = j["u"];
  if (!j.is_array()) {
    err = "solution file: expected an array of values or an object with \"u\"";
    return std::nullopt;
  }
  return j;
}

int run(const std::string& command, const Options& o) {
  std::string example = !o.positional_example.empty() ? o.positional_example : o.example;
  if (example.empty() && o.config_path.empty()) {
    if (command != "propcheck") return print_error("config-error", "one of --config or --example is required", 3);
    example = "ex3.7";
  }
  if (!example.empty() && !o.config_path.empty())
    return print_error("config-error", "--config and --example are mutually exclusive", 3);

  adbvp_config* cfg = nullptr;
  const adbvp_status st = example.empty() ? adbvp_config_from_file(o.config_path.c_str(), &cfg)
                                          : adbvp_config_from_example(example.c_str(), &cfg);
  if (st != ADBVP_OK) return print_last_error(st);
  std::unique_ptr<adbvp_config, void (*)(adbvp_config*)> guard(cfg, adbvp_config_free);

  Json ov = Json::object();
  auto put = [&](const char* key, const auto& v) {
    if (v) ov[key] = *v;
  };
  put("theorem", o.theorem);
  put("lambda", o.lambda);
  put("lambda_grid", o.lambda_grid);
  put("c", o.c);
  put("c1", o.c1);
  put("c2", o.c2);
  put("c3", o.c3);
  put("d", o.d);
  put("tol", o.tol);
  put("max_iter", o.max_iter);
  put("seed", o.seed);
  put("n_starts", o.n_starts);
  put("sweep_n", o.sweep_n);
  put("n_cases", o.n_cases);
  put("method", o.method);
  put("format", o.format);
  put("path", o.out);
  if (o.solution) {
    std::string err;
    auto sol = read_solution(*o.solution, err);
    if (!sol) return print_error("config-error", err, 3);
    ov["solution"] = *sol;
  }
  if (!ov.empty()) {
    const adbvp_status ost = adbvp_config_apply_overrides(cfg, ov.dump().c_str());
    if (ost != ADBVP_OK) return print_last_error(ost);
  }

  char* body = nullptr;
  const int rc = adbvp_run(cfg, command.c_str(), &body);
  std::unique_ptr<char, void (*)(char*)> body_guard(body, adbvp_string_free);
  if (*adbvp_last_error()) return print_last_error(rc);

  std::optional<std::string> path;
  if (const char* p = adbvp_config_output_path(cfg)) path = p;
  if (path) {
    std::ofstream f(*path, std::ios::binary);
    if (!f) return print_error("config-error", "cannot write '" + *path + "'", 3);
    f << body;
  } else {
    std::fwrite(body, 1, std::strlen(body), stdout);
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Existence certificates and solvers for anisotropic discrete boundary value problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(adbvp_version()));

  Options o;
  const std::pair<const char*, const char*> commands[] = {
      {"validate", "Check instance constraints and the growth certificate"},
      {"constants", "Print derived constants (A, K, K0, C1, p-, p+)"},
      {"certify", "Check a theorem's hypotheses and report the admissible lambda-interval"},
      {"solve", "Compute a critical point for one lambda"},
      {"sweep", "Solve over a lambda grid or the certified interval"},
      {"multistart", "Collect distinct critical points from many starts"},
      {"verify", "Check a candidate solution"},
      {"example", "Run a built-in example end to end"},
      {"propcheck", "Randomized inequality and coercivity checks"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config_path, "JSON configuration file");
    sub->add_option("--example", o.example, "Built-in example id (ex3.3, ex3.7, ex3.10)");
    if (std::string(name) == "example") sub->add_option("id", o.positional_example, "Built-in example id");
    sub->add_option("--theorem", o.theorem, "T1.1, T3.2, T3.4, T3.5, T3.8 or C3.9");
    sub->add_option("--lambda", o.lambda, "Parameter lambda");
    sub->add_option("--lambda-grid", o.lambda_grid, "LO:HI:N[:log|lin]");
    sub->add_option("--c", o.c);
    sub->add_option("--c1", o.c1);
    sub->add_option("--c2", o.c2);
    sub->add_option("--c3", o.c3);
    sub->add_option("--d", o.d);
    sub->add_option("--tol", o.tol, "Residual tolerance");
    sub->add_option("--max-iter", o.max_iter, "Newton iteration cap");
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--starts", o.n_starts, "Number of multistart initial points");
    sub->add_option("--points", o.sweep_n, "Sweep points inside a certified interval");
    sub->add_option("--cases", o.n_cases, "Property-check cases");
    sub->add_option("--method", o.method, "newton, minimize or localized");
    sub->add_option("--format", o.format, "json or csv");
    sub->add_option("--out", o.out, "Write the result to a file");
    sub->add_option("--solution", o.solution, "File with u(0..T+1) as an array or a solve result");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return print_error("config-error", e.what(), 3);
  }
  return run(app.get_subcommands().front()->get_name(), o);
}
