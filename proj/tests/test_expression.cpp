#include <doctest.h>

#include <cmath>

#include "aniso_dbvp/error.hpp"
#include "aniso_dbvp/expression.hpp"

using adbvp::Errc;
using adbvp::Expression;
using adbvp::ParseError;

namespace {

Errc code_of(const char* src, std::size_t* offset = nullptr) {
  try {
    Expression::parse(src);
  } catch (const ParseError& e) {
    if (offset) *offset = e.offset();
    return e.code();
  }
  FAIL("expected a parse error for " << src);
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("weight expression reaches e^147 at k=3") {
  const Expression e = Expression::parse("exp(k*(10-k)^2)");
  CHECK(e(3.0) == doctest::Approx(std::exp(147.0)).epsilon(1e-15));
  CHECK(e.uses_k());
  CHECK_FALSE(e.uses_x());
}

TEST_CASE("primitive of the atan nonlinearity") {
  const Expression e = Expression::parse("atan(400*t)/400");
  CHECK(e(0.0, 0.1) == doctest::Approx(3.864503832939941e-3).epsilon(1e-14));
  CHECK(e.uses_x());
}

TEST_CASE("precedence and associativity") {
  CHECK(Expression::parse("2^3^2")(0) == 512.0);
  CHECK(Expression::parse("-2^2")(0) == -4.0);
  CHECK(Expression::parse("8/4/2")(0) == 1.0);
  CHECK(Expression::parse("1 - 2 - 3")(0) == -4.0);
  CHECK(Expression::parse("2*k + 3")(5) == 13.0);
  CHECK(Expression::parse("2e-3 + 1.5E2")(0) == doctest::Approx(150.002));
}

TEST_CASE("functions and constants") {
  CHECK(Expression::parse("pow(2, 10)")(0) == 1024.0);
  CHECK(Expression::parse("min(3, k)")(1) == 1.0);
  CHECK(Expression::parse("max(3, k)")(1) == 3.0);
  CHECK(Expression::parse("ln(e)")(0) == doctest::Approx(1.0));
  CHECK(Expression::parse("cos(pi)")(0) == doctest::Approx(-1.0));
  CHECK(Expression::parse("sqrt(abs(-16))")(0) == 4.0);
  CHECK(Expression::parse("sin(0)")(0) == 0.0);
}

TEST_CASE("syntax errors carry offsets") {
  std::size_t off = 0;
  CHECK(code_of("1+", &off) == Errc::syntax_error);
  CHECK(off == 2);
  CHECK(code_of("(1") == Errc::syntax_error);
  CHECK(code_of("1 2") == Errc::syntax_error);
  CHECK(code_of("pow(1)") == Errc::syntax_error);
}

TEST_CASE("unknown identifiers") {
  std::size_t off = 99;
  CHECK(code_of("2*y", &off) == Errc::unknown_identifier);
  CHECK(off == 2);
  CHECK(code_of("foo(1)") == Errc::unknown_identifier);
}
