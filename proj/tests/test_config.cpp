#include <doctest.h>

#include <cmath>

#include "aniso_dbvp/app.hpp"
#include "aniso_dbvp/config.hpp"
#include "aniso_dbvp/error.hpp"
#include "aniso_dbvp/functional.hpp"
#include "aniso_dbvp/report.hpp"
#include "fixtures.hpp"

using namespace adbvp;

namespace {

void check_same_data(const ProblemInstance& a, const ProblemInstance& b, const std::vector<double>& xs) {
  REQUIRE(a.T() == b.T());
  for (int k = 0; k <= a.T(); ++k) CHECK(a.w(k) == doctest::Approx(b.w(k)).epsilon(1e-15));
  for (int k = 1; k <= a.T() + 1; ++k) CHECK(a.q(k) == doctest::Approx(b.q(k)).epsilon(1e-15));
  for (int k = 0; k <= a.T() + 1; ++k) CHECK(a.p(k) == doctest::Approx(b.p(k)).epsilon(1e-15));
  for (int k = 1; k <= a.T(); ++k)
    for (double x : xs) {
      CHECK(a.f(k, x) == doctest::Approx(b.f(k, x)).epsilon(1e-15));
      CHECK(a.F(k, x) == doctest::Approx(b.F(k, x)).epsilon(1e-15));
    }
}

Json run_json(const ConfigDocument& doc, const std::string& cmd, int expected_exit) {
  const CommandOutput out = run_command(doc, cmd);
  CHECK(out.exit_code == expected_exit);
  return Json::parse(out.body);
}

}  // namespace

TEST_CASE("built-in examples match hand-written closures") {
  const std::vector<double> xs{-3.0, -1e-6, 1e-7, 3e-6, 1e-5, 0.1, 2.0};
  check_same_data(*builtin_example("ex3.3").instance, fixtures::exp_weights_instance(), xs);
  check_same_data(*builtin_example("ex3.10").instance, fixtures::exp_weights_instance(), xs);
  check_same_data(*builtin_example("ex3.7").instance, fixtures::linear_exponent_instance(), xs);
  CHECK_THROWS_AS(builtin_example("ex9.9"), Error);
}

TEST_CASE("config parsing") {
  const char* text = R"json({
    "instance": {"T": 2, "w": [1, 2, 3], "q": "1", "p": "2 + k/10", "f": "x/(1+x^2)",
                 "growth": {"c0": 1}},
    "run": {"theorem": "T3.4", "c": 2, "d": 0.1, "lambda": 0.5, "seed": 9},
    "output": {"format": "csv"}
  })json";
  const ConfigDocument doc = parse_config_text(text);
  CHECK(doc.instance->w(2) == 3.0);
  CHECK(doc.instance->p(1) == doctest::Approx(2.1));
  CHECK(doc.instance->F(1, 1.0) == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-10));
  CHECK(doc.run.seed == 9);
  CHECK(doc.output.format == "csv");
  REQUIRE(doc.instance->nonlinearity().growth);
  CHECK(doc.instance->nonlinearity().growth->alpha_plus() == 2.0);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config_text("{"), Error);
  CHECK_THROWS_AS(parse_config_text(R"({"instance": {"T": 2, "w": 1, "q": 1, "p": 2}})"), Error);
  CHECK_THROWS_AS(parse_config_text(R"({"instance": {"T": 2, "w": [1, 1], "q": 1, "p": 2, "f": "x"}})"), Error);
  CHECK_THROWS_AS(parse_config_text(R"({"instance": {"T": 2, "w": 1, "q": 1, "p": 2, "f": "x"}, "run": {"bogus": 1}})"),
                  Error);
  try {
    parse_config_text(R"({"instance": {"T": 2, "w": 1, "q": 1, "p": 2, "f": "x+"}})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.code() == Errc::syntax_error);
  }
  CHECK(parse_lambda_grid("0.1:10:5:log").log_spacing);
  CHECK(parse_lambda_grid("1:2:3").n == 3);
  CHECK_THROWS_AS(parse_lambda_grid("1:2"), Error);
}

TEST_CASE("reports survive a JSON round trip") {
  const auto inst = fixtures::linear_exponent_instance();
  const auto rep = certify_t1_1(inst, *inst.nonlinearity().growth, 17.1, 0.1);
  const Json j = to_json(rep);
  const CertificationReport back = certification_from_json(Json::parse(j.dump()));
  CHECK(to_json(back) == j);
  CHECK(back.interval->lower == rep.interval->lower);
  CHECK(back.interval->upper == rep.interval->upper);

  const SolveResult s = solve_newton(inst, 1.0, build_test_function(inst, 0.1));
  const Json sj = to_json(s);
  const SolveResult sback = solve_result_from_json(Json::parse(sj.dump()));
  CHECK(sback.u == s.u);
  CHECK(sback.I_value == s.I_value);
  CHECK(to_json(sback) == sj);

  CHECK(decode_number(encode_number(INFINITY)) == INFINITY);
  CHECK(std::isnan(decode_number(encode_number(NAN))));
}

TEST_CASE("commands on built-in examples") {
  const Json c = run_json(builtin_example("ex3.7"), "certify", 0);
  CHECK(c["certification"]["status"] == "certified");
  CHECK(c["schema_version"] == kSchemaVersion);

  ConfigDocument bad = builtin_example("ex3.3");
  apply_overrides(bad, Json{{"c2", 1e-9}});
  const Json b = run_json(bad, "certify", 1);
  bool in2 = false;
  for (const auto& n : b["certification"]["failed_conditions"]) in2 = in2 || n == "in2";
  CHECK(in2);
  CHECK(b.contains("paper-discrepancy"));

  ConfigDocument solve = builtin_example("ex3.7");
  apply_overrides(solve, Json{{"method", "newton"}});
  const Json s = run_json(solve, "solve", 0);
  CHECK(s["solution"]["converged"] == true);
  CHECK(s["verification"]["overall"] == true);

  const Json k = run_json(builtin_example("ex3.3"), "constants", 0);
  CHECK(k["constants"]["A"] == 2048.0);
  run_json(builtin_example("ex3.7"), "validate", 0);
}

TEST_CASE("csv sweep output") {
  ConfigDocument doc = builtin_example("ex3.7");
  apply_overrides(doc, Json{{"lambda_grid", "0.5:5:4:log"}, {"format", "csv"}});
  const CommandOutput out = run_command(doc, "sweep");
  CHECK(out.exit_code == 0);
  CHECK(out.body.rfind("lambda,converged,I,residual_inf,sup_norm,norm_minus\n", 0) == 0);
  CHECK(std::count(out.body.begin(), out.body.end(), '\n') == 5);
}

TEST_CASE("discrepancy section for the exponential-weight example") {
  const Json d = discrepancy_section("ex3.3", fixtures::exp_weights_instance());
  REQUIRE(d["entries"].size() == 4);
  CHECK(d["entries"][0]["quantity"] == "a_d(c1)");
  CHECK(d["entries"][0]["agrees_3sf"] == true);
  CHECK(discrepancy_section("ex3.7", fixtures::linear_exponent_instance()).is_null());
}

TEST_CASE("error objects and exit codes") {
  CHECK(exit_code_for(Errc::config_error) == 3);
  CHECK(exit_code_for(Errc::syntax_error) == 3);
  CHECK(exit_code_for(Errc::empty_interval) == 1);
  const Json e = error_object(Errc::syntax_error, "bad", 4);
  CHECK(e["error"]["error"] == "syntax-error");
  CHECK(e["error"]["offset"] == 4);
}
