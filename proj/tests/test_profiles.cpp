#include "epcrit/profiles.hpp"

#include <doctest.h>

#include <cmath>

using namespace epcrit;

TEST_CASE("profile evaluation and exact derivative") {
    const ScalarProfile rho("1/(1+x^2)");
    CHECK(rho.eval(0.0) == doctest::Approx(1.0));
    CHECK(rho.eval(2.0) == doctest::Approx(0.2));
    CHECK(rho.deriv(1.0) == doctest::Approx(-0.5));

    const ScalarProfile u("-2*atan(x)");
    CHECK(u.eval(1.0) == doctest::Approx(-std::atan(1.0) * 2));
    CHECK(u.deriv(0.0) == doctest::Approx(-2.0));
}

TEST_CASE("half-line domain guard") {
    const ScalarProfile p("sqrt(x)", Domain::HalfLine);
    CHECK(p.eval(4.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(p.eval(-1.0), DomainError);
    CHECK_THROWS_AS(p.deriv(-0.5), DomainError);

    const ScalarProfile full("x^2");
    CHECK(full.eval(-3.0) == doctest::Approx(9.0));
}

TEST_CASE("non-finite values are rejected at the boundary") {
    const ScalarProfile p("exp(x)");
    CHECK_THROWS_AS(p.eval(1000.0), DomainError);  // overflow -> inf
}

TEST_CASE("weighted mass against hand integrals") {
    const ScalarProfile one("1", Domain::HalfLine);
    // nu = 0: e0 = a;  nu = 1: a^2/2;  nu = 2: a^3/3;  nu = 3: a^4/4
    for (int nu = 0; nu <= 3; ++nu) {
        const double a = 1.7;
        const double expect = std::pow(a, nu + 1) / (nu + 1);
        CHECK(weighted_mass(one, nu, a) == doctest::Approx(expect).epsilon(1e-12));
    }

    const ScalarProfile quad("1+x^2", Domain::HalfLine);
    // nu = 1: integral of (1+s^2) s = a^2/2 + a^4/4
    const double a = 0.9;
    CHECK(weighted_mass(quad, 1, a) ==
          doctest::Approx(a * a / 2 + a * a * a * a / 4).epsilon(1e-12));
}

TEST_CASE("weighted field is the mass rescaled") {
    const ScalarProfile n0("exp(-x)", Domain::HalfLine);
    const double a = 1.3;
    for (int nu = 1; nu <= 3; ++nu) {
        CHECK(weighted_field(n0, nu, a) ==
              doctest::Approx(weighted_mass(n0, nu, a) / std::pow(a, nu)).epsilon(1e-12));
    }
    // Continuous extension at the origin.
    CHECK(weighted_field(n0, 2, 0.0) == 0.0);
}

TEST_CASE("negative density profiles are rejected") {
    const ScalarProfile bad("x-1", Domain::HalfLine);
    CHECK_THROWS_AS(weighted_mass(bad, 1, 2.0), DomainError);
}

TEST_CASE("printed derivative round-trips") {
    const ScalarProfile p("x*exp(-(x^2))");
    const ScalarProfile re(p.printed_derivative());
    for (double x : {-1.5, 0.0, 0.4, 2.0}) {
        CHECK(re.eval(x) == doctest::Approx(p.deriv(x)).epsilon(1e-14));
    }
}
