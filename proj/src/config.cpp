#include "aniso_dbvp/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>

#include "aniso_dbvp/error.hpp"
#include "aniso_dbvp/expression.hpp"
#include "log.hpp"

namespace adbvp {

using Json = nlohmann::ordered_json;

namespace detail {

LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("ANISO_DBVP_LOG");
    if (!env) return LogLevel::error;
    const std::string_view v(env);
    if (v == "debug") return LogLevel::debug;
    if (v == "info") return LogLevel::info;
    return LogLevel::error;
  }();
  return level;
}

void log(LogLevel level, std::string_view message) {
  if (static_cast<int>(level) > static_cast<int>(log_threshold())) return;
  static std::mutex mu;
  const char* tag = level == LogLevel::error ? "error" : level == LogLevel::info ? "info" : "debug";
  std::lock_guard lock(mu);
  std::cerr << "[aniso-dbvp " << tag << "] " << message << '\n';
}

}  // namespace detail

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::config_error, msg); }

Expression parse_field(const std::string& where, const std::string& src) {
  try {
    return Expression::parse(src);
  } catch (const ParseError& e) {
    throw ParseError(e.code(), where + ": " + e.what(), e.offset());
  }
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where + ": expected a number");
  return j.get<double>();
}

// Values of a k-indexed quantity on [first, last], from an array or an expression in k.
std::vector<double> indexed(const Json& j, const std::string& where, int first, int last) {
  const auto n = static_cast<std::size_t>(last - first + 1);
  std::vector<double> out;
  if (j.is_number()) {
    out.assign(n, j.get<double>());
  } else if (j.is_string()) {
    const Expression e = parse_field(where, j.get<std::string>());
    if (e.uses_x()) fail(where + ": expression may depend on k only");
    for (int k = first; k <= last; ++k) out.push_back(e(k));
  } else if (j.is_array()) {
    if (j.size() != n)
      fail(where + ": expected " + std::to_string(n) + " values for k = " + std::to_string(first) + ".." +
           std::to_string(last) + ", got " + std::to_string(j.size()));
    for (std::size_t i = 0; i < n; ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  } else {
    fail(where + ": expected an array or an expression string");
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!std::isfinite(out[i])) fail(where + ": non-finite value at k=" + std::to_string(first + static_cast<int>(i)));
  return out;
}

std::optional<Expression> optional_expr(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  if (!obj[key].is_string()) fail(where + "." + key + ": expected an expression string");
  return parse_field(where + "." + key, obj[key].get<std::string>());
}

ProblemInstance build_instance(const Json& inst, std::vector<std::string>& warnings) {
  if (!inst.is_object()) fail("instance: missing or not an object");
  if (!inst.contains("T") || !inst["T"].is_number_integer()) fail("instance.T: expected an integer");
  const int T = inst["T"].get<int>();
  if (T < 1) fail("instance.T: must be >= 1");
  for (const char* key : {"w", "q", "p"})
    if (!inst.contains(key)) fail(std::string("instance.") + key + ": missing");

  std::vector<double> w = indexed(inst["w"], "instance.w", 0, T);
  std::vector<double> q;
  if (inst["q"].is_array() && inst["q"].size() == static_cast<std::size_t>(T) + 2) {
    q = indexed(inst["q"], "instance.q", 0, T + 1);
    q.erase(q.begin());
    warnings.push_back("instance.q: q(0) supplied and ignored (q is used on k = 1..T+1 only)");
    detail::log(detail::LogLevel::info, warnings.back());
  } else {
    q = indexed(inst["q"], "instance.q", 1, T + 1);
  }
  std::vector<double> p = indexed(inst["p"], "instance.p", 0, T + 1);

  const bool has_f = inst.contains("f"), has_sep = inst.contains("separable");
  if (has_f == has_sep) fail("instance: exactly one of 'f' and 'separable' is required");

  Nonlinearity nl;
  if (has_f) {
    if (!inst["f"].is_string()) fail("instance.f: expected an expression string");
    const Expression f = parse_field("instance.f", inst["f"].get<std::string>());
    const auto F = optional_expr(inst, "F", "instance");
    const auto df = optional_expr(inst, "df", "instance");
    PointFn Ffn, dffn;
    if (F) Ffn = [F = *F](int k, double t) { return F(k, t); };
    if (df) dffn = [df = *df](int k, double x) { return df(k, x); };
    nl = Nonlinearity([f](int k, double x) { return f(k, x); }, Ffn, dffn);
  } else {
    const Json& s = inst["separable"];
    if (!s.is_object()) fail("instance.separable: expected an object");
    if (!s.contains("beta")) fail("instance.separable.beta: missing");
    if (!s.contains("g") || !s["g"].is_string()) fail("instance.separable.g: expected an expression string");
    SeparableForm form;
    form.beta = indexed(s["beta"], "instance.separable.beta", 1, T);
    const Expression g = parse_field("instance.separable.g", s["g"].get<std::string>());
    if (g.uses_k()) fail("instance.separable.g: expression may depend on x only");
    form.g = [g](double x) { return g(0.0, x); };
    if (auto G = optional_expr(s, "G", "instance.separable")) form.G = [G = *G](double t) { return G(0.0, t); };
    if (auto dg = optional_expr(s, "dg", "instance.separable")) form.dg = [dg = *dg](double x) { return dg(0.0, x); };
    if (inst.contains("F")) fail("instance.F: give the primitive as separable.G for separable forms");
    nl = Nonlinearity::separable(std::move(form));
  }

  if (inst.contains("growth") && !inst["growth"].is_null()) {
    const Json& g = inst["growth"];
    if (!g.is_object()) fail("instance.growth: expected an object");
    if (!g.contains("c0")) fail("instance.growth.c0: missing");
    GrowthCertificate gc;
    gc.c0 = number(g["c0"], "instance.growth.c0");
    gc.alpha = indexed(g.contains("alpha") ? g["alpha"] : Json(2.0), "instance.growth.alpha", 1, T);
    nl.growth = std::move(gc);
  }

  std::optional<double> lambda;
  if (inst.contains("lambda") && !inst["lambda"].is_null()) lambda = number(inst["lambda"], "instance.lambda");
  try {
    return ProblemInstance(T, std::move(w), std::move(q), std::move(p), std::move(nl), lambda);
  } catch (const Error& e) {
    fail(std::string("instance: ") + e.what());
  }
}

void read_run(const Json& run, RunSpec& spec) {
  if (!run.is_object()) fail("run: expected an object");
  for (const auto& [key, val] : run.items()) {
    const std::string where = "run." + key;
    if (val.is_null()) continue;
    if (key == "theorem") {
      if (!val.is_string()) fail(where + ": expected a string");
      spec.theorem = val.get<std::string>();
    } else if (key == "c") spec.c = number(val, where);
    else if (key == "c1") spec.c1 = number(val, where);
    else if (key == "c2") spec.c2 = number(val, where);
    else if (key == "c3") spec.c3 = number(val, where);
    else if (key == "d") spec.d = number(val, where);
    else if (key == "lambda") spec.lambda = number(val, where);
    else if (key == "lambda_grid") {
      if (!val.is_string()) fail(where + ": expected \"LO:HI:N[:log]\"");
      spec.lambda_grid = parse_lambda_grid(val.get<std::string>());
    } else if (key == "tol") spec.solver.tol = number(val, where);
    else if (key == "max_iter") {
      if (!val.is_number_integer()) fail(where + ": expected an integer");
      spec.solver.max_iter = val.get<int>();
    } else if (key == "seed") {
      if (!val.is_number_integer() || val.get<long long>() < 0) fail(where + ": expected a non-negative integer");
      spec.seed = val.get<std::uint64_t>();
    } else if (key == "n_starts" || key == "sweep_n" || key == "n_cases") {
      if (!val.is_number_integer() || val.get<int>() < 1) fail(where + ": expected a positive integer");
      (key == "n_starts" ? spec.n_starts : key == "sweep_n" ? spec.sweep_n : spec.n_cases) = val.get<int>();
    } else if (key == "method") {
      const std::string m = val.is_string() ? val.get<std::string>() : "";
      if (m != "newton" && m != "minimize" && m != "localized") fail(where + ": expected newton, minimize or localized");
      spec.method = m;
    } else if (key == "solution") {
      if (!val.is_array()) fail(where + ": expected an array of T+2 numbers");
      std::vector<double> v;
      for (std::size_t i = 0; i < val.size(); ++i) v.push_back(number(val[i], where + "[" + std::to_string(i) + "]"));
      spec.solution = std::move(v);
    } else {
      fail(where + ": unknown key");
    }
  }
  if (!(spec.solver.tol > 0.0)) fail("run.tol: must be > 0");
  if (spec.solver.max_iter < 0) fail("run.max_iter: must be >= 0");
}

void read_output(const Json& out, OutputSpec& spec) {
  if (!out.is_object()) fail("output: expected an object");
  for (const auto& [key, val] : out.items()) {
    if (val.is_null()) continue;
    if (key == "format") {
      const std::string f = val.is_string() ? val.get<std::string>() : "";
      if (f != "json" && f != "csv") fail("output.format: expected json or csv");
      spec.format = f;
    } else if (key == "path") {
      if (!val.is_string()) fail("output.path: expected a string");
      spec.path = val.get<std::string>();
    } else {
      fail("output." + key + ": unknown key");
    }
  }
}

const std::map<std::string, std::string>& examples() {
  static const std::map<std::string, std::string> table{
      {"ex3.3", R"json({
  "instance": {
    "T": 10,
    "w": "exp(k*(10-k)^2)",
    "q": "2^k",
    "p": "2*k/11+3",
    "f": "exp((k+2)*(k-13))*x/(x^2+1e-11)^2",
    "F": "1e11/2*exp((k+2)*(k-13))*t^2/(t^2+1e-11)",
    "df": "exp((k+2)*(k-13))*(1e-11-3*x^2)/(x^2+1e-11)^3",
    "growth": {"c0": 0.000012, "alpha": "2"}
  },
  "run": {"theorem": "T3.2", "c1": 1e-9, "c2": 1e9, "d": 1e-5, "lambda": 1, "method": "localized"},
  "output": {"format": "json"}
})json"},
      {"ex3.7", R"json({
  "instance": {
    "T": 10,
    "w": "1",
    "q": "1",
    "p": "k+3",
    "separable": {
      "beta": "1",
      "g": "1/((400*x)^2+1)",
      "G": "atan(400*t)/400",
      "dg": "-320000*x/((400*x)^2+1)^2"
    },
    "growth": {"c0": 0.0039, "alpha": "2"}
  },
  "run": {"theorem": "T1.1", "c": 17.1, "d": 0.1, "lambda": 1},
  "output": {"format": "json"}
})json"},
      {"ex3.10", R"json({
  "instance": {
    "T": 10,
    "w": "exp(k*(10-k)^2)",
    "q": "2^k",
    "p": "2*k/11+3",
    "f": "exp((k+2)*(k-13))*x/(x^2+1e-11)^2",
    "F": "1e11/2*exp((k+2)*(k-13))*t^2/(t^2+1e-11)",
    "df": "exp((k+2)*(k-13))*(1e-11-3*x^2)/(x^2+1e-11)^3",
    "growth": {"c0": 0.000012, "alpha": "2"}
  },
  "run": {"theorem": "T3.8", "c3": 0.05, "d": 5e-10, "lambda": 1},
  "output": {"format": "json"}
})json"},
  };
  return table;
}

}  // namespace

LambdaGrid parse_lambda_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3 && parts.size() != 4) fail("lambda-grid: expected LO:HI:N[:log], got '" + text + "'");
  LambdaGrid g;
  try {
    std::size_t used = 0;
    g.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("lo");
    g.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("hi");
    g.n = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("n");
  } catch (const std::exception&) {
    fail("lambda-grid: malformed number in '" + text + "'");
  }
  if (parts.size() == 4) {
    if (parts[3] != "log" && parts[3] != "lin") fail("lambda-grid: spacing must be 'log' or 'lin'");
    g.log_spacing = parts[3] == "log";
  }
  if (g.n < 1) fail("lambda-grid: N must be >= 1");
  return g;
}

ConfigDocument parse_config(const Json& doc) {
  if (!doc.is_object()) fail("config: top level must be an object");
  for (const auto& [key, val] : doc.items())
    if (key != "instance" && key != "run" && key != "output") fail("config: unknown section '" + key + "'");
  ConfigDocument out;
  out.source = doc;
  if (!doc.contains("instance")) fail("instance: missing");
  out.instance = std::make_shared<const ProblemInstance>(build_instance(doc["instance"], out.warnings));
  if (doc.contains("run")) read_run(doc["run"], out.run);
  if (doc.contains("output")) read_output(doc["output"], out.output);
  return out;
}

ConfigDocument parse_config_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ConfigDocument load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

const std::vector<std::string>& builtin_example_ids() {
  static const std::vector<std::string> ids{"ex3.3", "ex3.7", "ex3.10"};
  return ids;
}

const std::string& builtin_example_json(const std::string& id) {
  const auto& t = examples();
  const auto it = t.find(id);
  if (it == t.end()) fail("unknown example '" + id + "' (known: ex3.3, ex3.7, ex3.10)");
  return it->second;
}

ConfigDocument builtin_example(const std::string& id) {
  ConfigDocument doc = parse_config_text(builtin_example_json(id));
  doc.example_id = id;
  return doc;
}

void apply_overrides(ConfigDocument& doc, const Json& overrides) {
  if (!overrides.is_object()) fail("overrides: expected an object");
  Json run = Json::object(), output = Json::object();
  for (const auto& [key, val] : overrides.items()) {
    if (key == "format" || key == "path") output[key] = val;
    else run[key] = val;
  }
  read_run(run, doc.run);
  read_output(output, doc.output);
  for (const auto& [key, val] : run.items()) doc.source["run"][key] = val;
  for (const auto& [key, val] : output.items()) doc.source["output"][key] = val;
}

}  // namespace adbvp
