#include <doctest.h>

#include <cmath>

#include "aniso_dbvp/error.hpp"
#include "aniso_dbvp/functional.hpp"
#include "aniso_dbvp/hypothesis.hpp"
#include "aniso_dbvp/oracle.hpp"
#include "aniso_dbvp/solver.hpp"
#include "fixtures.hpp"

using namespace adbvp;

TEST_CASE("brute force on the linear T=2 case") {
  const auto r = brute_force_min(fixtures::linear_t2(), 1.0, 2.0);
  CHECK(r.u[1] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(r.u[2] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(r.I_value == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("brute force at lambda = 0 sits at the origin") {
  const auto r = brute_force_min(fixtures::linear_t2(), 0.0, 2.0);
  CHECK(r.I_value == 0.0);
  CHECK(sup_norm(r.u) == 0.0);
}

TEST_CASE("brute force refuses large instances") {
  CHECK_THROWS_AS(brute_force_min(fixtures::linear_exponent_instance(), 1.0, 1.0), Error);
}

TEST_CASE("verification of solved and unsolved profiles") {
  const auto inst = fixtures::linear_exponent_instance();
  const auto rep = certify_t1_1(inst, *inst.nonlinearity().growth, 17.1, 0.1);
  const SolveResult s = solve_newton(inst, 1.0, build_test_function(inst, 0.1));
  const auto good = verify_solution(inst, 1.0, s.u.values(), rep);
  CHECK(good.overall);
  CHECK(good.find("sup-norm")->pass);

  const GridFunction vbar = build_test_function(inst, 0.1);
  const auto bad = verify_solution(inst, 1.0, vbar.values(), rep);
  CHECK_FALSE(bad.overall);
  CHECK_FALSE(bad.find("residual")->pass);

  const auto zero = verify_solution(fixtures::linear_t2(), 0.0, GridFunction::zero(2).values());
  CHECK(zero.find("residual")->pass);
  CHECK_FALSE(zero.find("nontrivial")->pass);
}

TEST_CASE("property suite on a short run") {
  const auto v = property_suite(default_property_case, 100, 1);
  for (const char* name : {"norm-equiv-lower", "modular-small", "modular-large", "sup-norm-bound", "Phi-sandwich", "shell-chain"})
    CHECK_MESSAGE(v.find(name)->pass, name);
}

TEST_CASE("coercivity probe gates on the certificate") {
  const auto inst = fixtures::exp_weights_instance();
  const auto bad = coercivity_probe(inst, 1.0, GrowthCertificate{1.2e-5, std::vector<double>(10, 3.0)});
  CHECK_FALSE(bad.overall);
  const auto good = coercivity_probe(inst, 0.0, *inst.nonlinearity().growth);
  CHECK(good.overall);
}

TEST_CASE("default box radius") {
  CHECK(default_box_radius(std::nullopt) == 2.0);
  CertificationReport r;
  r.norm_bounds = OpenInterval{0.0, 3.0};
  CHECK(default_box_radius(r) == 6.0);
}
