#include <doctest.h>

#include <cmath>

#include "aniso_dbvp/error.hpp"
#include "aniso_dbvp/hypothesis.hpp"
#include "fixtures.hpp"

using namespace adbvp;

// Reference values from tests/oracles/*.py (60-digit arithmetic).
constexpr double kA33 = 2048.0;
constexpr double kK33 = 2.59352244021185649095e-10;
constexpr double kAdC1 = 30898916.7758977428807;
constexpr double kAdC2 = 0.00898818401992298450237;
constexpr double kSumFOverDhat = 13387090198872765.878;
constexpr double kLower37 = 0.10350617240705333821;
constexpr double kUpper37 = 67.876745773862515383;
constexpr double kMiddle37 = 0.011541510946051091972;

namespace {

const ConditionResult* find(const CertificationReport& r, const std::string& name) {
  for (const auto& c : r.conditions)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("derived constants of the exponential-weight instance") {
  const DerivedConstants dc = derived_constants(fixtures::exp_weights_instance());
  CHECK(dc.A == kA33);
  CHECK(dc.K == doctest::Approx(kK33).epsilon(1e-12));
  CHECK(dc.p_minus == 3.0);
  CHECK(dc.p_plus == doctest::Approx(5.0));
}

TEST_CASE("derived constants of p(k)=k+3") {
  const DerivedConstants dc = derived_constants(fixtures::linear_exponent_instance());
  CHECK(dc.p_minus == 3.0);
  CHECK(dc.p_plus == 14.0);
  CHECK(dc.A == 12.0);
  CHECK(dc.K == doctest::Approx(std::pow(22.0, -13.0 / 14.0)).epsilon(1e-13));
  CHECK(dc.C1 == 22.0);
}

TEST_CASE("a_d by two routes") {
  const auto inst = fixtures::exp_weights_instance();
  const DerivedConstants dc = derived_constants(inst);
  CHECK(a_d(inst, dc, 1e-5, 1e-9) == doctest::Approx(kAdC1).epsilon(1e-10));
  CHECK(a_d(inst, dc, 1e-5, 1e9) == doctest::Approx(kAdC2).epsilon(1e-10));
  // c = 0: max over {0} is zero.
  const double a0 = a_d(inst, dc, 1e-5, 0.0);
  CHECK(a0 == doctest::Approx(dc.p_minus * sum_F(inst, 1e-5) / (std::pow(1e-5, 3.0) * dc.A)).epsilon(1e-12));
}

TEST_CASE("certify_t2 on the exponential-weight instance") {
  const auto inst = fixtures::exp_weights_instance();
  const auto rep = certify_t2(inst, *inst.nonlinearity().growth, 1e-9, 1e9, 1e-5);
  REQUIRE(rep.certified());
  CHECK(rep.status == "certified");
  CHECK(rep.interval->lower == doctest::Approx(1.0 / kAdC1).epsilon(1e-10));
  CHECK(rep.interval->upper == doctest::Approx(1.0 / kAdC2).epsilon(1e-10));
  REQUIRE(rep.norm_bounds);
  CHECK(rep.norm_bounds->lower == doctest::Approx(8.89611592444944882e-32).epsilon(1e-10));
  CHECK(rep.shell.has_value());
}

TEST_CASE("certify_t2 with c1 = c2 fails in2") {
  const auto inst = fixtures::exp_weights_instance();
  const auto rep = certify_t2(inst, *inst.nonlinearity().growth, 1e-9, 1e-9, 1e-5);
  CHECK_FALSE(rep.certified());
  CHECK(rep.status == "hypothesis-failed");
  bool has_in2 = false;
  for (const auto& n : rep.failed_conditions()) has_in2 = has_in2 || n == "in2";
  CHECK(has_in2);
}

TEST_CASE("T1.1 specialisation reproduces the interval") {
  const auto inst = fixtures::linear_exponent_instance();
  const auto rep = certify_t1_1(inst, *inst.nonlinearity().growth, 17.1, 0.1);
  REQUIRE(rep.certified());
  CHECK(rep.interval->lower == doctest::Approx(kLower37).epsilon(1e-12));
  CHECK(rep.interval->upper == doctest::Approx(kUpper37).epsilon(1e-10));
  CHECK(rep.quantities.at("middle") == doctest::Approx(kMiddle37).epsilon(1e-12));
  CHECK(*rep.sup_norm_bound == 17.1);
}

TEST_CASE("T3.4 and T3.5 agree on the separable instance") {
  const auto inst = fixtures::linear_exponent_instance();
  const auto& gc = *inst.nonlinearity().growth;
  const auto a = certify_t3(inst, gc, 17.1, 0.1);
  const auto b = certify_t3_separable(inst, gc, 17.1, 0.1);
  REQUIRE(a.certified());
  REQUIRE(b.certified());
  CHECK(a.interval->lower == doctest::Approx(b.interval->lower).epsilon(1e-9));
  CHECK(a.interval->upper == doctest::Approx(b.interval->upper).epsilon(1e-9));
  CHECK_THROWS_AS(certify_t3_separable(fixtures::exp_weights_instance(), gc, 17.1, 0.1), Error);
}

TEST_CASE("T3.8 data on the exponential-weight instance") {
  const auto inst = fixtures::exp_weights_instance();
  const auto rep = certify_t4(inst, *inst.nonlinearity().growth, 0.05, 5e-10);
  CHECK(rep.quantities.at("F5_rhs") == doctest::Approx(kSumFOverDhat).epsilon(1e-10));
  REQUIRE(rep.dhat);
  CHECK(*rep.dhat == doctest::Approx(4.33309782007839651457e-29).epsilon(1e-10));
  const ConditionResult* f5 = find(rep, "F5");
  REQUIRE(f5);
  CHECK_FALSE(f5->holds);
  CHECK(rep.status == "hypothesis-failed");
  const ConditionResult* coer = find(rep, "coercivity-numeric");
  REQUIRE(coer);
  CHECK(coer->holds);
}

TEST_CASE("ball maximum of a non-monotone primitive") {
  // F(t) = t e^{-t^2}: maximum 1/sqrt(2e) at t = 1/sqrt(2).
  Nonlinearity nl([](int, double x) { return (1 - 2 * x * x) * std::exp(-x * x); },
                  [](int, double t) { return t * std::exp(-t * t); });
  const ProblemInstance inst(2, {1, 1, 1}, {1, 1, 1}, {2, 2, 2, 2}, nl);
  CHECK(max_F_on_ball(inst, 1, 5.0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_E)).epsilon(1e-12));
  CHECK(sum_max_F_on_ball(inst, 0.5) == doctest::Approx(2 * 0.5 * std::exp(-0.25)).epsilon(1e-14));
}

TEST_CASE("theorem ids") {
  for (auto id : {TheoremId::T1_1, TheoremId::T3_2, TheoremId::T3_4, TheoremId::T3_5, TheoremId::T3_8, TheoremId::C3_9})
    CHECK(theorem_from_string(to_string(id)) == id);
  CHECK_FALSE(theorem_from_string("T9.9").has_value());
}
