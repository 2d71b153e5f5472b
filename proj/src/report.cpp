#include "aniso_dbvp/report.hpp"

#include <cmath>
#include <sstream>

#include "aniso_dbvp/error.hpp"
#include "format.hpp"

namespace adbvp {

namespace {

Json interval_json(const std::optional<OpenInterval>& iv) {
  if (!iv) return nullptr;
  return Json{{"lower", encode_number(iv->lower)}, {"upper", encode_number(iv->upper)}};
}

std::optional<OpenInterval> interval_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return OpenInterval{decode_number(j.at("lower")), decode_number(j.at("upper"))};
}

Json number_map(const std::map<std::string, double>& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[k] = encode_number(v);
  return out;
}

std::map<std::string, double> number_map_from(const Json& j) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) out[k] = decode_number(v);
  return out;
}

SignClass sign_from(const std::string& s) {
  for (auto c : {SignClass::zero, SignClass::nonnegative, SignClass::positive, SignClass::sign_changing})
    if (s == to_string(c)) return c;
  throw Error(Errc::invalid_argument, "unknown sign class '" + s + "'");
}

void csv_row(std::ostringstream& os, double lambda, const SolveResult& r) {
  using detail::fmt_num;
  os << fmt_num(lambda) << ',' << (r.converged ? "true" : "false") << ',' << fmt_num(r.I_value) << ','
     << fmt_num(r.residual_inf) << ',' << fmt_num(r.sup_norm) << ',' << fmt_num(r.norm_minus) << '\n';
}

}  // namespace

Json encode_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double decode_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(Errc::invalid_argument, "expected a number, got " + j.dump());
}

Json to_json(const DerivedConstants& dc) {
  return Json{{"p_minus", encode_number(dc.p_minus)}, {"p_plus", encode_number(dc.p_plus)},
              {"w_minus", encode_number(dc.w_minus)}, {"w_plus", encode_number(dc.w_plus)},
              {"q_minus", encode_number(dc.q_minus)}, {"q_plus", encode_number(dc.q_plus)},
              {"A", encode_number(dc.A)},             {"K", encode_number(dc.K)},
              {"log_K", encode_number(dc.log_K)},     {"K0", encode_number(dc.K0)},
              {"C1", encode_number(dc.C1)}};
}

Json to_json(const CertificationReport& rep) {
  Json conds = Json::array();
  for (const auto& c : rep.conditions)
    conds.push_back(Json{{"name", c.name}, {"holds", c.holds}, {"lhs", encode_number(c.lhs)},
                         {"rhs", encode_number(c.rhs)}, {"margin", encode_number(c.margin)}, {"detail", c.detail}});
  Json out{{"theorem", to_string(rep.theorem)},
           {"status", rep.status},
           {"inputs", number_map(rep.inputs)},
           {"conditions", std::move(conds)},
           {"failed_conditions", rep.failed_conditions()},
           {"interval", interval_json(rep.interval)},
           {"norm_bounds", interval_json(rep.norm_bounds)},
           {"sup_norm_bound", rep.sup_norm_bound ? encode_number(*rep.sup_norm_bound) : Json(nullptr)},
           {"shell", interval_json(rep.shell)},
           {"dhat", rep.dhat ? encode_number(*rep.dhat) : Json(nullptr)},
           {"quantities", number_map(rep.quantities)}};
  return out;
}

CertificationReport certification_from_json(const Json& j) {
  CertificationReport rep;
  const auto id = theorem_from_string(j.at("theorem").get<std::string>());
  if (!id) throw Error(Errc::invalid_argument, "unknown theorem id");
  rep.theorem = *id;
  rep.status = j.at("status").get<std::string>();
  rep.inputs = number_map_from(j.at("inputs"));
  for (const auto& c : j.at("conditions")) {
    ConditionResult r;
    r.name = c.at("name").get<std::string>();
    r.holds = c.at("holds").get<bool>();
    r.lhs = decode_number(c.at("lhs"));
    r.rhs = decode_number(c.at("rhs"));
    r.margin = decode_number(c.at("margin"));
    r.detail = c.at("detail").get<std::string>();
    rep.conditions.push_back(std::move(r));
  }
  rep.interval = interval_from(j.at("interval"));
  rep.norm_bounds = interval_from(j.at("norm_bounds"));
  if (!j.at("sup_norm_bound").is_null()) rep.sup_norm_bound = decode_number(j.at("sup_norm_bound"));
  rep.shell = interval_from(j.at("shell"));
  if (!j.at("dhat").is_null()) rep.dhat = decode_number(j.at("dhat"));
  rep.quantities = number_map_from(j.at("quantities"));
  return rep;
}

Json to_json(const SolveResult& res) {
  Json u = Json::array();
  for (double x : res.u.values()) u.push_back(encode_number(x));
  Json hist = Json::array();
  for (double x : res.residual_history) hist.push_back(encode_number(x));
  Json loc = nullptr;
  if (res.localization)
    loc = Json{{"r1", encode_number(res.localization->r1)},
               {"r2", encode_number(res.localization->r2)},
               {"inside", res.localization->inside}};
  return Json{{"status", res.status},
              {"converged", res.converged},
              {"iterations", res.iterations},
              {"u", std::move(u)},
              {"I", encode_number(res.I_value)},
              {"Phi", encode_number(res.Phi_value)},
              {"residual_inf", encode_number(res.residual_inf)},
              {"grad_inf", encode_number(res.grad_inf)},
              {"norm_minus", encode_number(res.norm_minus)},
              {"sup_norm", encode_number(res.sup_norm)},
              {"sign_class", to_string(res.sign_class)},
              {"localization", std::move(loc)},
              {"residual_history", std::move(hist)}};
}

SolveResult solve_result_from_json(const Json& j) {
  SolveResult r;
  std::vector<double> u;
  for (const auto& x : j.at("u")) u.push_back(decode_number(x));
  r.u = GridFunction(std::move(u));
  r.status = j.at("status").get<std::string>();
  r.converged = j.at("converged").get<bool>();
  r.iterations = j.at("iterations").get<int>();
  r.I_value = decode_number(j.at("I"));
  r.Phi_value = decode_number(j.at("Phi"));
  r.residual_inf = decode_number(j.at("residual_inf"));
  r.grad_inf = decode_number(j.at("grad_inf"));
  r.norm_minus = decode_number(j.at("norm_minus"));
  r.sup_norm = decode_number(j.at("sup_norm"));
  r.sign_class = sign_from(j.at("sign_class").get<std::string>());
  if (const auto& loc = j.at("localization"); !loc.is_null())
    r.localization = Localization{decode_number(loc.at("r1")), decode_number(loc.at("r2")), loc.at("inside").get<bool>()};
  for (const auto& x : j.at("residual_history")) r.residual_history.push_back(decode_number(x));
  return r;
}

Json to_json(const SweepResult& sweep) {
  Json pts = Json::array();
  for (const auto& p : sweep.points)
    pts.push_back(Json{{"lambda", encode_number(p.lambda)},
                       {"warm_started", p.warm_started},
                       {"error", p.error.empty() ? Json(nullptr) : Json(p.error)},
                       {"result", to_json(p.result)}});
  return Json{{"success_fraction", encode_number(sweep.success_fraction)},
              {"upper_capped", sweep.upper_capped},
              {"points", std::move(pts)}};
}

Json to_json(const VerificationVerdict& v) {
  Json checks = Json::array();
  for (const auto& c : v.checks)
    checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"value", encode_number(c.value)},
                          {"tolerance", encode_number(c.tolerance)}, {"detail", c.detail}});
  return Json{{"overall", v.overall}, {"checks", std::move(checks)}, {"counterexamples", v.counterexamples}};
}

Json to_json(const GrowthCheck& g) {
  return Json{{"verdict", to_string(g.verdict)}, {"witness_k", g.witness_k}, {"witness_t", encode_number(g.witness_t)},
              {"excess", encode_number(g.excess)}, {"detail", g.detail}};
}

Json to_json(const std::vector<Violation>& violations) {
  Json out = Json::array();
  for (const auto& v : violations)
    out.push_back(Json{{"field", v.field}, {"index", v.index}, {"value", encode_number(v.value)}, {"message", v.message}});
  return out;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "lambda,converged,I,residual_inf,sup_norm,norm_minus\n";
  for (const auto& p : sweep.points) csv_row(os, p.lambda, p.result);
  return os.str();
}

std::string solutions_csv(double lambda, const std::vector<SolveResult>& results) {
  std::ostringstream os;
  os << "lambda,converged,I,residual_inf,sup_norm,norm_minus\n";
  for (const auto& r : results) csv_row(os, lambda, r);
  return os.str();
}

}  // namespace adbvp
