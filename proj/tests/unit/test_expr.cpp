// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "ysl/expr.hpp"

using ysl::Expr;

TEST_CASE("expression parser: arithmetic and precedence") {
  CHECK(Expr::parse("1+2*3").eval({}) == doctest::Approx(7.0));
  CHECK(Expr::parse("(1+2)*3").eval({}) == doctest::Approx(9.0));
  CHECK(Expr::parse("2^3^2").eval({}) == doctest::Approx(512.0));  // right assoc
  CHECK(Expr::parse("-2^2").eval({}) == doctest::Approx(-4.0));
  CHECK(Expr::parse("6/4").eval({}) == doctest::Approx(1.5));
  CHECK(Expr::parse("1e-3 + 2.5E2").eval({}) == doctest::Approx(250.001));
}

TEST_CASE("expression parser: variables, constants, functions") {
  CHECK(Expr::parse("0.3*sin(pi*y)").eval({{"y", 0.5}}) == doctest::Approx(0.3));
  CHECK(Expr::parse("cos(x)*cos(y)").eval({{"x", 0.0}, {"y", 0.0}}) == doctest::Approx(1.0));
  CHECK(Expr::parse("sqrt(abs(-9))").eval({}) == doctest::Approx(3.0));
  CHECK(Expr::parse("exp(0)+tanh(0)").eval({}) == doctest::Approx(1.0));
}

TEST_CASE("expression parser: errors") {
  CHECK_THROWS_AS(Expr::parse("1+"), std::invalid_argument);
  CHECK_THROWS_AS(Expr::parse("sin(1"), std::invalid_argument);
  CHECK_THROWS_AS(Expr::parse("1 2"), std::invalid_argument);
  CHECK_THROWS_AS(Expr::parse("foo(1)").eval({}), std::invalid_argument);
  CHECK_THROWS_AS(Expr::parse("y").eval({}), std::invalid_argument);  // unknown variable
}
