#include "aniso_dbvp/app.hpp"

#include <cmath>

#include "aniso_dbvp/functional.hpp"
#include "aniso_dbvp/hypothesis.hpp"
#include "aniso_dbvp/oracle.hpp"
#include "aniso_dbvp/solver.hpp"
#include "format.hpp"
#include "log.hpp"

namespace adbvp {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::config_error, msg); }

double need(const std::optional<double>& v, const char* name, const std::string& theorem) {
  if (!v) fail(std::string("run.") + name + ": required by " + theorem);
  return *v;
}

const GrowthCertificate& certificate(const ProblemInstance& inst) {
  if (!inst.nonlinearity().growth) fail("instance.growth: a growth certificate {c0, alpha} is required");
  return *inst.nonlinearity().growth;
}

std::optional<CertificationReport> certify(const ConfigDocument& doc, bool required) {
  const auto& run = doc.run;
  if (!run.theorem) {
    if (required) fail("run.theorem: required (one of T1.1, T3.2, T3.4, T3.5, T3.8, C3.9)");
    return std::nullopt;
  }
  const auto id = theorem_from_string(*run.theorem);
  if (!id) fail("run.theorem: unknown theorem '" + *run.theorem + "' (one of T1.1, T3.2, T3.4, T3.5, T3.8, C3.9)");
  const ProblemInstance& inst = *doc.instance;
  const GrowthCertificate& gc = certificate(inst);
  const std::string& th = *run.theorem;
  switch (*id) {
    case TheoremId::T3_2:
      return certify_t2(inst, gc, need(run.c1, "c1", th), need(run.c2, "c2", th), need(run.d, "d", th));
    case TheoremId::T3_4: return certify_t3(inst, gc, need(run.c, "c", th), need(run.d, "d", th));
    case TheoremId::T3_5: return certify_t3_separable(inst, gc, need(run.c, "c", th), need(run.d, "d", th));
    case TheoremId::T1_1: return certify_t1_1(inst, gc, need(run.c, "c", th), need(run.d, "d", th));
    case TheoremId::T3_8: return certify_t4(inst, gc, need(run.c3, "c3", th), need(run.d, "d", th));
    case TheoremId::C3_9: return certify_c10(inst, gc, need(run.c3, "c3", th), need(run.d, "d", th));
  }
  return std::nullopt;
}

double lambda_of(const ConfigDocument& doc) {
  if (doc.run.lambda) return *doc.run.lambda;
  if (doc.instance->lambda()) return *doc.instance->lambda();
  fail("run.lambda: required");
}

Json envelope(const ConfigDocument& doc, const std::string& command) {
  return Json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"example", doc.example_id.empty() ? Json(nullptr) : Json(doc.example_id)},
              {"config", doc.source},
              {"warnings", doc.warnings}};
}

struct Solved {
  SolveResult result;
  std::string method;
};

void log_result(const std::string& method, const SolveResult& r) {
  detail::log(detail::LogLevel::debug, method + ": " + r.status + " after " + std::to_string(r.iterations) +
                                           " iterations, residual_inf " + detail::fmt_num(r.residual_inf));
}

Solved solve_once(const ConfigDocument& doc, const std::optional<CertificationReport>& rep);

Solved solve(const ConfigDocument& doc, const std::optional<CertificationReport>& rep) {
  Solved s = solve_once(doc, rep);
  log_result(s.method, s.result);
  return s;
}

Solved solve_once(const ConfigDocument& doc, const std::optional<CertificationReport>& rep) {
  const ProblemInstance& inst = *doc.instance;
  const double lambda = lambda_of(doc);
  const double d = doc.run.d.value_or(0.0);
  const GridFunction init = build_test_function(inst, d);
  const SolverOptions& opts = doc.run.solver;
  if (doc.run.method == "localized") {
    if (!rep || !rep->shell) fail("run.method: localized needs a theorem whose report defines a shell (T3.2 family)");
    return {localized_solve(inst, lambda, rep->shell->lower, rep->shell->upper, d, opts), "localized"};
  }
  if (doc.run.method == "minimize") return {minimize_energy(inst, lambda, init, opts), "minimize"};
  SolveResult r = solve_newton(inst, lambda, init, opts);
  if (r.converged) return {std::move(r), "newton"};
  log_result("newton", r);
  detail::log(detail::LogLevel::info, "newton did not converge; falling back to energy descent");
  SolveResult m = minimize_energy(inst, lambda, init, opts);
  if (m.converged || m.residual_inf < r.residual_inf) return {std::move(m), "minimize"};
  return {std::move(r), "newton"};
}

Json discrepancy_entry(const std::string& quantity, double printed, double recomputed, std::optional<double> doubled) {
  // Agreement "to 3 significant figures": within half a unit of the third digit.
  auto agrees = [&](double x) { return std::fabs(x - printed) <= 5e-3 * std::fabs(printed); };
  Json e{{"quantity", quantity},
         {"printed", encode_number(printed)},
         {"recomputed", encode_number(recomputed)},
         {"relative_deviation", encode_number((recomputed - printed) / printed)},
         {"agrees_3sf", agrees(recomputed)}};
  if (doubled) {
    e["doubled_F"] = encode_number(*doubled);
    e["doubled_relative_deviation"] = encode_number((*doubled - printed) / printed);
    e["doubled_agrees_3sf"] = agrees(*doubled);
  } else {
    e["doubled_F"] = nullptr;
  }
  return e;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate", "constants", "certify", "solve",    "sweep",
                                              "multistart", "verify",  "example", "propcheck"};
  return names;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::f_quadrature_failed:
    case Errc::degenerate_denominator:
    case Errc::empty_interval:
    case Errc::unbounded_interval: return exit_hypothesis_failed;
    default: return exit_config_error;
  }
}

Json error_object(Errc code, const std::string& message, std::optional<std::size_t> offset) {
  Json e{{"error", std::string(errc_name(code))}, {"message", message}, {"exit_code", exit_code_for(code)}};
  if (offset) e["offset"] = *offset;
  return Json{{"schema_version", kSchemaVersion}, {"error", std::move(e)}};
}

Json discrepancy_section(const std::string& example_id, const ProblemInstance& inst) {
  if (example_id != "ex3.3" && example_id != "ex3.10") return nullptr;
  const GrowthCertificate& gc = certificate(inst);
  Json entries = Json::array();
  Json params;
  if (example_id == "ex3.3") {
    const double c1 = 1e-9, c2 = 1e9, d = 1e-5;
    params = Json{{"c1", c1}, {"c2", c2}, {"d", d}};
    const CertificationReport r = certify_t2(inst, gc, c1, c2, d);
    // a_d is linear in F, so doubling F doubles both values and halves the interval.
    const double a1 = r.quantities.at("a_d_c1"), a2 = r.quantities.at("a_d_c2");
    entries.push_back(discrepancy_entry("a_d(c1)", 30898916.775, a1, 2.0 * a1));
    entries.push_back(discrepancy_entry("a_d(c2)", 0.009, a2, 2.0 * a2));
    entries.push_back(discrepancy_entry("interval.lower", 0.000000033, 1.0 / a1, 0.5 / a1));
    entries.push_back(discrepancy_entry("interval.upper", 111.0, 1.0 / a2, 0.5 / a2));
  } else {
    const double c3 = 0.05, d = 5e-10;
    params = Json{{"c3", c3}, {"d", d}};
    const CertificationReport t4 = certify_t4(inst, gc, c3, d);
    const CertificationReport c10 = certify_c10(inst, gc, c3, d);
    const double rhs = t4.quantities.at("F5_rhs");
    entries.push_back(discrepancy_entry("F5.lhs", 2.086867833e13, t4.quantities.at("F5_lhs"), std::nullopt));
    entries.push_back(discrepancy_entry("F5.rhs", 1.338709020e16, rhs, 2.0 * rhs));
    entries.push_back(discrepancy_entry("interval.lower", 7.469883186e-17, 1.0 / rhs, 0.5 / rhs));
    entries.push_back(discrepancy_entry("Lambda_r.upper", 4.791870305e-14, c10.quantities.at("upper"), std::nullopt));
  }
  bool diverges = false;
  for (const auto& e : entries) diverges = diverges || !e["agrees_3sf"].get<bool>();
  return Json{{"example", example_id}, {"parameters", params}, {"diverges", diverges}, {"entries", entries}};
}

CommandOutput run_command(const ConfigDocument& doc, const std::string& command) {
  const ProblemInstance& inst = *doc.instance;
  const bool csv = doc.output.format == "csv";
  if (csv && command != "sweep" && command != "multistart") fail("output.format: csv is available for sweep and multistart");
  Json out = envelope(doc, command);
  CommandOutput res;
  detail::log(detail::LogLevel::debug, "command " + command + (doc.example_id.empty() ? "" : " on " + doc.example_id));

  if (command == "validate") {
    const auto violations = validate_instance(inst);
    out["violations"] = to_json(violations);
    bool growth_ok = true;
    if (inst.nonlinearity().growth && validate_certificate(inst, *inst.nonlinearity().growth).empty()) {
      const GrowthCheck g = check_growth(inst, *inst.nonlinearity().growth);
      out["growth"] = to_json(g);
      growth_ok = g.verdict == GrowthVerdict::holds;
    } else {
      out["growth"] = nullptr;
    }
    out["valid"] = violations.empty();
    res.exit_code = violations.empty() && growth_ok ? exit_ok : exit_hypothesis_failed;
  } else if (command == "constants") {
    out["constants"] = to_json(derived_constants(inst));
  } else if (command == "certify") {
    const auto rep = certify(doc, true);
    out["certification"] = to_json(*rep);
    if (Json disc = discrepancy_section(doc.example_id, inst); !disc.is_null()) out["paper-discrepancy"] = disc;
    res.exit_code = rep->certified() ? exit_ok : exit_hypothesis_failed;
  } else if (command == "solve") {
    const auto rep = certify(doc, false);
    const Solved s = solve(doc, rep);
    out["lambda"] = encode_number(lambda_of(doc));
    out["method"] = s.method;
    out["solution"] = to_json(s.result);
    out["verification"] = to_json(verify_solution(inst, lambda_of(doc), s.result.u.values(), rep));
    res.exit_code = s.result.converged ? exit_ok : exit_no_convergence;
  } else if (command == "sweep") {
    OpenInterval interval;
    int n = doc.run.sweep_n;
    bool log_spacing = true;
    if (doc.run.lambda_grid) {
      interval = {doc.run.lambda_grid->lo, doc.run.lambda_grid->hi};
      n = doc.run.lambda_grid->n;
      log_spacing = doc.run.lambda_grid->log_spacing;
    } else {
      const auto rep = certify(doc, true);
      if (!rep->certified()) {
        out["certification"] = to_json(*rep);
        res.exit_code = exit_hypothesis_failed;
        res.body = out.dump(2) + "\n";
        return res;
      }
      interval = *rep->interval;
    }
    SweepOptions so;
    so.log_spacing = log_spacing;
    so.d = doc.run.d.value_or(0.0);
    const SweepResult sw = sweep_lambda(inst, interval, n, doc.run.solver, so);
    if (sw.upper_capped)
      detail::log(detail::LogLevel::info, "sweep: unbounded interval capped at lower * " + detail::fmt_num(so.infinite_upper_cap));
    res.exit_code = sw.success_fraction == 1.0 ? exit_ok : exit_no_convergence;
    if (csv) {
      res.body = sweep_csv(sw);
      return res;
    }
    out["interval"] = Json{{"lower", encode_number(interval.lower)}, {"upper", encode_number(interval.upper)}};
    out["sweep"] = to_json(sw);
  } else if (command == "multistart") {
    const double lambda = lambda_of(doc);
    MultiStartOptions ms;
    ms.d = doc.run.d.value_or(0.0);
    const auto found = multi_start(inst, lambda, doc.run.n_starts, doc.run.seed, doc.run.solver, ms);
    if (csv) {
      res.body = solutions_csv(lambda, found);
      return res;
    }
    out["lambda"] = encode_number(lambda);
    out["n_starts"] = doc.run.n_starts;
    out["seed"] = doc.run.seed;
    out["distinct"] = found.size();
    Json list = Json::array();
    for (const auto& r : found) list.push_back(to_json(r));
    out["solutions"] = std::move(list);
  } else if (command == "verify") {
    if (!doc.run.solution) fail("run.solution: required for verify (values on [0, T+1])");
    const auto rep = certify(doc, false);
    const VerificationVerdict v = verify_solution(inst, lambda_of(doc), *doc.run.solution, rep);
    out["lambda"] = encode_number(lambda_of(doc));
    out["verification"] = to_json(v);
    res.exit_code = v.overall ? exit_ok : exit_hypothesis_failed;
  } else if (command == "example") {
    const auto rep = certify(doc, true);
    out["certification"] = to_json(*rep);
    int code = rep->certified() ? exit_ok : exit_hypothesis_failed;
    if (doc.run.lambda || inst.lambda()) {
      const Solved s = solve(doc, rep);
      out["lambda"] = encode_number(lambda_of(doc));
      out["method"] = s.method;
      out["solution"] = to_json(s.result);
      out["verification"] = to_json(verify_solution(inst, lambda_of(doc), s.result.u.values(), rep));
      if (code == exit_ok && !s.result.converged) code = exit_no_convergence;
    }
    if (Json disc = discrepancy_section(doc.example_id, inst); !disc.is_null()) out["paper-discrepancy"] = disc;
    res.exit_code = code;
  } else if (command == "propcheck") {
    const VerificationVerdict v = property_suite(default_property_case, doc.run.n_cases, doc.run.seed);
    out["n_cases"] = doc.run.n_cases;
    out["seed"] = doc.run.seed;
    out["properties"] = to_json(v);
    bool ok = v.overall;
    if (inst.nonlinearity().growth && (doc.run.lambda || inst.lambda())) {
      CoercivityOptions co;
      co.seed = doc.run.seed;
      const VerificationVerdict c = coercivity_probe(inst, lambda_of(doc), *inst.nonlinearity().growth, co);
      out["coercivity"] = to_json(c);
      ok = ok && c.overall;
    }
    res.exit_code = ok ? exit_ok : exit_hypothesis_failed;
  } else {
    fail("unknown command '" + command + "'");
  }
  res.body = out.dump(2) + "\n";
  return res;
}

}  // namespace adbvp
