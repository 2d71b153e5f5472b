#include <doctest.h>

#include <cmath>

#include "aniso_dbvp/error.hpp"
#include "aniso_dbvp/functional.hpp"
#include "aniso_dbvp/solver.hpp"
#include "fixtures.hpp"

using namespace adbvp;

TEST_CASE("newton solves the linear T=2 case in one step") {
  const auto inst = fixtures::linear_t2();
  const SolveResult r = solve_newton(inst, 1.0, GridFunction::zero(2));
  CHECK(r.converged);
  CHECK(r.u[1] == doctest::Approx(0.5));
  CHECK(r.u[2] == doctest::Approx(0.5));
  CHECK(r.I_value == doctest::Approx(-0.5));
  CHECK(r.sign_class == SignClass::positive);
}

TEST_CASE("newton and descent agree on the separable instance") {
  const auto inst = fixtures::linear_exponent_instance();
  const GridFunction init = build_test_function(inst, 0.1);
  for (double lambda : {0.2, 1.0, 10.0}) {
    const SolveResult n = solve_newton(inst, lambda, init);
    const SolveResult m = minimize_energy(inst, lambda, init);
    REQUIRE(n.converged);
    REQUIRE(m.converged);
    CHECK(n.residual_inf <= 1e-10);
    CHECK(n.I_value == doctest::Approx(m.I_value).epsilon(1e-9));
    CHECK(n.sup_norm < 17.1);
    CHECK(n.sign_class == SignClass::positive);
  }
}

TEST_CASE("sign classification") {
  CHECK(classify_sign(GridFunction::zero(3)) == SignClass::zero);
  CHECK(classify_sign(GridFunction({0, 1, 0, 0})) == SignClass::nonnegative);
  CHECK(classify_sign(GridFunction({0, 1, 2, 0})) == SignClass::positive);
  CHECK(classify_sign(GridFunction({0, 1, -2, 0})) == SignClass::sign_changing);
  CHECK(std::string(to_string(SignClass::sign_changing)) == "sign-changing");
}

TEST_CASE("lambda grid inside an open interval") {
  const auto lin = sweep_lambdas({1.0, 3.0}, 3, false);
  REQUIRE(lin.size() == 3);
  CHECK(lin.front() > 1.0);
  CHECK(lin.back() < 3.0);
  CHECK(lin[1] == doctest::Approx(2.0));
  const auto single = sweep_lambdas({1.0, 100.0}, 1, true);
  CHECK(single[0] == doctest::Approx(10.0));
  const auto capped = sweep_lambdas({2.0, INFINITY}, 4, true);
  CHECK(capped.back() < 2000.0);
  CHECK_THROWS_AS(sweep_lambdas({3.0, 1.0}, 4, true), Error);
}

TEST_CASE("sweep over the certified interval of the separable instance") {
  const auto inst = fixtures::linear_exponent_instance();
  SweepOptions so;
  so.d = 0.1;
  const SweepResult sw = sweep_lambda(inst, {0.1035061724, 67.87674577}, 8, {}, so);
  REQUIRE(sw.points.size() == 8);
  CHECK(sw.success_fraction == 1.0);
  for (std::size_t i = 1; i < sw.points.size(); ++i) CHECK(sw.points[i].lambda > sw.points[i - 1].lambda);
}

TEST_CASE("multistart is deterministic and deduplicates") {
  const auto inst = fixtures::linear_t2();
  const auto a = multi_start(inst, 1.0, 8, 3);
  const auto b = multi_start(inst, 1.0, 8, 3);
  REQUIRE(a.size() == 1);
  REQUIRE(b.size() == 1);
  CHECK(a[0].u == b[0].u);
}

TEST_CASE("localized solve rejects a shell that excludes the start") {
  const auto inst = fixtures::linear_exponent_instance();
  const SolveResult r = localized_solve(inst, 1.0, 10.0, 20.0, 0.1);
  CHECK_FALSE(r.converged);
  CHECK(r.status == "bad-shell");
}
