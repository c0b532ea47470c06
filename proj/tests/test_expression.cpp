#include "epcrit/expression.hpp"

#include <doctest.h>

#include <cmath>

using namespace epcrit;

namespace {

double ev(const std::string& text, double x) { return eval_expr(*parse_expression(text), x); }

double dv(const std::string& text, double x) {
    return eval_expr(*differentiate(parse_expression(text)), x);
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
    CHECK(ev("1+2*3", 0.0) == doctest::Approx(7.0));
    CHECK(ev("(1+2)*3", 0.0) == doctest::Approx(9.0));
    CHECK(ev("2-3-4", 0.0) == doctest::Approx(-5.0));
    CHECK(ev("12/4/3", 0.0) == doctest::Approx(1.0));
    CHECK(ev("x", 2.5) == doctest::Approx(2.5));
    // Unary minus sits inside the power operand: -x^2 reads as (-x)^2.
    CHECK(ev("-x^2", 3.0) == doctest::Approx(9.0));
    CHECK(ev("-(x^2)", 3.0) == doctest::Approx(-9.0));
}

TEST_CASE("scientific notation and unary minus") {
    CHECK(ev("1e-3", 0.0) == doctest::Approx(1e-3));
    CHECK(ev("2.5E2", 0.0) == doctest::Approx(250.0));
    CHECK(ev("3*-2", 0.0) == doctest::Approx(-6.0));
    CHECK(ev("1--2", 0.0) == doctest::Approx(3.0));
}

TEST_CASE("function catalogue") {
    CHECK(ev("sin(x)", 1.0) == doctest::Approx(std::sin(1.0)));
    CHECK(ev("cos(x)", 1.0) == doctest::Approx(std::cos(1.0)));
    CHECK(ev("exp(x)", 1.0) == doctest::Approx(std::exp(1.0)));
    CHECK(ev("ln(x)", 2.0) == doctest::Approx(std::log(2.0)));
    CHECK(ev("sqrt(x)", 2.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(ev("atan(x)", 0.7) == doctest::Approx(std::atan(0.7)));
    CHECK(ev("tanh(x)", 0.7) == doctest::Approx(std::tanh(0.7)));
    CHECK(ev("sinh(x)", 0.7) == doctest::Approx(std::sinh(0.7)));
    CHECK(ev("cosh(x)", 0.7) == doctest::Approx(std::cosh(0.7)));
}

TEST_CASE("derivatives are exact for the closed forms") {
    const double x = 0.37;
    CHECK(dv("x^3 - 2*x + sin(2*x)", x) ==
          doctest::Approx(3 * x * x - 2 + 2 * std::cos(2 * x)).epsilon(1e-12));
    CHECK(dv("exp(-(x^2))", x) == doctest::Approx(-2 * x * std::exp(-x * x)).epsilon(1e-12));
    CHECK(dv("1/(1+x^2)", x) ==
          doctest::Approx(-2 * x / ((1 + x * x) * (1 + x * x))).epsilon(1e-12));
    CHECK(dv("-2*atan(x)", x) == doctest::Approx(-2 / (1 + x * x)).epsilon(1e-12));
}

TEST_CASE("quotient and chain rules") {
    const double x = 1.3;
    CHECK(dv("sin(x)/x", x) ==
          doctest::Approx((x * std::cos(x) - std::sin(x)) / (x * x)).epsilon(1e-12));
    CHECK(dv("sqrt(1+x^2)", x) == doctest::Approx(x / std::sqrt(1 + x * x)).epsilon(1e-12));
    CHECK(dv("tanh(2*x)", x) ==
          doctest::Approx(2.0 / (std::cosh(2 * x) * std::cosh(2 * x))).epsilon(1e-12));
}

TEST_CASE("rendered derivative re-parses to the same function") {
    const auto e = parse_expression("x*exp(-(x^2))/(1+x^2)");
    const auto d = differentiate(e);
    const auto round_trip = parse_expression(to_string(d));
    for (double x : {-2.0, -0.5, 0.0, 0.9, 3.14}) {
        CHECK(eval_expr(*round_trip, x) == doctest::Approx(eval_expr(*d, x)).epsilon(1e-15));
    }
}

TEST_CASE("parse errors carry position context") {
    CHECK_THROWS_AS(parse_expression("1+"), ParseError);
    CHECK_THROWS_AS(parse_expression("(1+2"), ParseError);
    CHECK_THROWS_AS(parse_expression("bogus(x)"), ParseError);
    CHECK_THROWS_AS(parse_expression("x y"), ParseError);
    CHECK_THROWS_AS(parse_expression(""), ParseError);
    CHECK_THROWS_AS(parse_expression("x^2.5"), ParseError);  // integer exponents only
    CHECK_THROWS_AS(parse_expression("x^x"), ParseError);

    try {
        parse_expression("1+*2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 2);
    }
}

TEST_CASE("domain errors at evaluation time") {
    CHECK_THROWS_AS(ev("1/x", 0.0), DomainError);
    CHECK_THROWS_AS(ev("ln(x)", 0.0), DomainError);
    CHECK_THROWS_AS(ev("ln(x)", -1.0), DomainError);
    CHECK_THROWS_AS(ev("sqrt(x)", -1.0), DomainError);
}

TEST_CASE("negative integer exponents") {
    CHECK(ev("x^-2", 2.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(ev("x^-1", 0.0), DomainError);
}
