#include "epcrit/flowmap.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "epcrit/oracle.hpp"
#include "epcrit/riccati.hpp"

using namespace epcrit;

namespace {

IsotropicConfig make_config(int nu, double k, const std::string& n0, const std::string& u0) {
    InitialData d;
    d.rho0 = ScalarProfile(n0, Domain::HalfLine);
    d.u0 = ScalarProfile(u0, Domain::HalfLine);
    return IsotropicConfig(nu, k, d);
}

// Reference trajectory of r'' = k e0 r^{-nu} from (alpha, u0).
Trajectory path_oracle(int nu, double k, double e0, double alpha, double u0, double t_end) {
    IvpSpec spec;
    spec.rhs = [=](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = k * e0 * std::pow(y[0], -nu);
    };
    spec.y0 = {alpha, u0};
    spec.t1 = t_end;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-14;
    return integrate(spec);
}

}  // namespace

TEST_CASE("planar paths are exact parabolas") {
    // n0 = 1/2 on the half line gives e0(1) = 1/2.
    const IsotropicConfig cfg = make_config(0, 1.0, "0.5", "1");
    const FlowPoint p = flow_point(cfg, 1.0, 2.0);
    CHECK(p.r == doctest::Approx(4.0).epsilon(1e-14));  // 1 + 2 + 0.5*0.5*4... = 1+2+1
    CHECK(p.u == doctest::Approx(2.0).epsilon(1e-14));  // 1 + 0.5*2

    const IsotropicConfig vac = make_config(0, 1.0, "0", "1");
    const FlowPoint q = flow_point(vac, 1.0, 7.0);
    CHECK(q.r == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(q.u == doctest::Approx(1.0).epsilon(1e-14));

    const IsotropicConfig unit = make_config(0, 1.0, "1", "1");
    CHECK(flow_point(unit, 1.0, 1.0).r == doctest::Approx(2.5).epsilon(1e-12));
    const Trajectory tr = path_oracle(0, 1.0, 1.0, 1.0, 1.0, 1.0);
    CHECK(flow_point(unit, 1.0, 1.0).r ==
          doctest::Approx(tr.final_state()[0]).epsilon(1e-12));
}

TEST_CASE("cylindrical map inverts the parameter relation") {
    // For nu = 1, e0(a) = integral of n0(s) s ds; n0 = 2 gives e0(1) = 1.
    const IsotropicConfig c1 = make_config(1, 1.0, "2", "1");
    CHECK(c1.e0(1.0) == doctest::Approx(1.0).epsilon(1e-12));

    SUBCASE("zero forcing reduces to free streaming") {
        const IsotropicConfig free1 = make_config(1, 1.0, "0", "1");
        for (double t : {0.5, 2.0, 9.0}) {
            const FlowPoint p = flow_point(free1, 1.0, t);
            CHECK(p.r == doctest::Approx(1.0 + t).epsilon(1e-10));
            REQUIRE(p.tau.has_value());
            CHECK(*p.tau == doctest::Approx(std::log(1.0 + t)).epsilon(1e-8));
        }
    }
    SUBCASE("forced path matches the reference ODE") {
        const Trajectory tr = path_oracle(1, 1.0, 1.0, 1.0, 1.0, 2.0);
        const FlowPoint p = flow_point(c1, 1.0, 2.0);
        CHECK(p.r == doctest::Approx(tr.final_state()[0]).epsilon(1e-8));
        CHECK(p.u == doctest::Approx(tr.final_state()[1]).epsilon(1e-8));
    }
    SUBCASE("lower bound holds along the path") {
        for (int i = 1; i <= 50; ++i) {
            const double t = 0.2 * i;
            const FlowPoint p = flow_point(c1, 1.0, t);
            const double lo = std::sqrt(1.0 + 2.0 * t + 1.0 * t * t);
            CHECK(p.r >= lo * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("spherical map uses the hyperbolic parametrization") {
    // nu = 2: n0 = 3 gives e0(1) = 1.
    const IsotropicConfig c2 = make_config(2, 1.0, "3", "1");
    REQUIRE(c2.e0(1.0) == doctest::Approx(1.0).epsilon(1e-12));

    SUBCASE("parameters of the worked configuration") {
        const SphericalParams sp = spherical_params(1.0, 1.0, 1.0, 1.0);
        CHECK(sp.Q == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
        CHECK(sp.R == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
        CHECK(std::cosh(sp.tau0) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("path matches the reference ODE out to t = 100") {
        const Trajectory tr = path_oracle(2, 1.0, 1.0, 1.0, 1.0, 100.0);
        for (double t : {0.5, 3.0, 20.0, 100.0}) {
            const FlowPoint p = flow_point(c2, 1.0, t);
            CHECK(p.r == doctest::Approx(tr.eval_component(t, 0)).epsilon(1e-8));
            CHECK(p.u == doctest::Approx(tr.eval_component(t, 1)).epsilon(1e-8));
        }
    }
    SUBCASE("velocity saturates at the asymptotic speed") {
        const FlowPoint late = flow_point(c2, 1.0, 1000.0);
        CHECK(std::abs(late.u - std::sqrt(3.0)) < 1e-2);
    }
    SUBCASE("zero mass is free streaming") {
        const IsotropicConfig free2 = make_config(2, 1.0, "0", "1");
        CHECK(flow_point(free2, 1.0, 5.0).r == doctest::Approx(6.0).epsilon(1e-12));
    }
}

TEST_CASE("nu=3 closed form") {
    // n0 = 4 s^0? e0(a) = int 4 s^3 = a^4 -> e0(1) = 1, E0(1) = 1.
    const IsotropicConfig c3 = make_config(3, 1.0, "4", "1");
    REQUIRE(c3.e0(1.0) == doctest::Approx(1.0).epsilon(1e-12));

    SUBCASE("explicit radicand") {
        for (double t : {0.3, 1.0, 4.0}) {
            const FlowPoint p = flow_point(c3, 1.0, t);
            CHECK(p.r == doctest::Approx(std::sqrt(1.0 + 2.0 * t + 2.0 * t * t)).epsilon(1e-13));
        }
    }
    SUBCASE("matches the reference ODE") {
        const Trajectory tr = path_oracle(3, 1.0, 1.0, 1.0, 1.0, 50.0);
        for (double t : {1.0, 10.0, 50.0}) {
            const FlowPoint p = flow_point(c3, 1.0, t);
            CHECK(p.r == doctest::Approx(tr.eval_component(t, 0)).epsilon(1e-9));
        }
    }
    SUBCASE("late-time velocity approaches sqrt(u0^2 + k alpha E0)") {
        // Energy: u^2/2 + k e0 / (2 r^2) is conserved, so u -> sqrt(2) here.
        const FlowPoint late = flow_point(c3, 1.0, 1000.0);
        CHECK(std::abs(late.u - std::sqrt(2.0)) < 1e-6);
    }
    SUBCASE("central-force identity r = sqrt(1 + t^2)") {
        // Boundary case u0 = 0 permitted for the nu=3 closed form only.
        const IsotropicConfig b = make_config(3, 1.0, "4", "1e-30");
        for (double t : {0.5, 2.0, 10.0}) {
            CHECK(flow_point(b, 1.0, t).r ==
                  doctest::Approx(std::sqrt(1.0 + t * t)).epsilon(1e-9));
        }
    }
}

TEST_CASE("energy integral is conserved by every closed form") {
    struct Case {
        int nu;
        const char* n0;
    };
    const std::vector<Case> cases = {{1, "2"}, {2, "3"}, {3, "4"}};
    for (const auto& cs : cases) {
        const IsotropicConfig cfg = make_config(cs.nu, 1.3, cs.n0, "0.7");
        const double a = 1.4;
        const double e0 = cfg.e0(a);
        const double u0 = cfg.u0(a);
        auto energy = [&](double r, double u) {
            if (cs.nu == 1) return u * u - u0 * u0 - 2 * 1.3 * e0 * std::log(r / a);
            return u * u - u0 * u0 -
                   (2 * 1.3 * e0 / (cs.nu - 1)) *
                       (std::pow(a, 1 - cs.nu) - std::pow(r, 1 - cs.nu));
        };
        for (double t : {0.5, 5.0, 40.0}) {
            const FlowPoint p = flow_point(cfg, a, t);
            CHECK(std::abs(energy(p.r, p.u)) < 1e-9);
        }
    }
}

TEST_CASE("two-sided path bounds with positive floors") {
    SUBCASE("worked nu=2 numbers") {
        const auto [lo, hi] = flow_bounds(2, 1.0, 1.0, 1.0, 1.0, 10.0);
        CHECK(lo == doctest::Approx(std::cbrt(181.0)).epsilon(1e-12));
        CHECK(hi == doctest::Approx(1.0 + std::sqrt(3.0) * 10.0).epsilon(1e-12));
        const Trajectory tr = path_oracle(2, 1.0, 1.0, 1.0, 1.0, 10.0);
        const double r = tr.final_state()[0];
        CHECK(lo <= r);
        CHECK(r <= hi);
    }
    SUBCASE("cylindrical floor is time independent") {
        const double floor = 1.0 * std::exp(-1.0 / 2.0);  // alpha e^{-u0^2/(2 k e0)}
        for (double t : {0.0, 1.0, 100.0}) {
            const auto [lo, hi] = flow_bounds(1, 1.0, 1.0, 1.0, 1.0, t);
            CHECK(lo >= floor * (1 - 1e-12));
            CHECK(lo <= hi);
        }
    }
    SUBCASE("degenerate time zero") {
        const auto [lo, hi] = flow_bounds(2, 1.0, 1.0, 1.0, 1.0, 0.0);
        CHECK(lo == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(hi == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("planar rejects") { CHECK_THROWS(flow_bounds(0, 1.0, 1.0, 1.0, 1.0, 1.0)); }
}

TEST_CASE("variational indicator") {
    SUBCASE("planar recovers the explicit parabola") {
        const IsotropicConfig cfg = make_config(0, 1.0, "1", "1+0.2*x");
        const double a = 0.8;
        for (double t : {0.5, 2.0, 6.0}) {
            const IndicatorPoint ip = indicator_multid(cfg, a, t);
            const double expect = 1.0 + 0.2 * t + 0.5 * 1.0 * t * t;  // n0 = 1
            CHECK(ip.gamma == doctest::Approx(expect).epsilon(1e-10));
        }
    }
    SUBCASE("starts from the initial gradient") {
        const IsotropicConfig cfg = make_config(2, 1.0, "3", "1+0.5*x");
        const IndicatorPoint ip = indicator_multid(cfg, 1.0, 0.0);
        CHECK(ip.gamma == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(ip.gamma_t == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("nu=3 matches the closed-form gradient of the flow map") {
        const IsotropicConfig cfg = make_config(3, 1.0, "4", "1");
        // n0 = 4: e0 = a^4, E0 = a, rho0 = 4 a^3; u0 = 1, du0 = 0.
        const double a = 1.0;
        for (double t : {0.4, 1.5, 8.0}) {
            const IndicatorPoint ip = indicator_multid(cfg, a, t);
            // Gamma = (alpha + [u0 + a du0] t + [u0 du0 - k E0 + k n0 a/2] t^2)/r
            const double num = a + 1.0 * t + (0.0 - 1.0 + 2.0) * t * t;
            const double r = std::sqrt(1.0 + 2.0 * t + 2.0 * t * t);
            CHECK(ip.gamma == doctest::Approx(num / r).epsilon(1e-8));
        }
    }
    SUBCASE("finite-difference gradient of the flow map") {
        const IsotropicConfig cfg = make_config(2, 1.0, "3*exp(-x)", "1+0.3*x");
        const double a = 1.2, h = 1e-5 * a;
        for (double t : {0.5, 3.0, 15.0}) {
            const double fd =
                (flow_point(cfg, a + h, t).r - flow_point(cfg, a - h, t).r) / (2 * h);
            const IndicatorPoint ip = indicator_multid(cfg, a, t);
            if (ip.gamma > 0.1) {
                CHECK(fd == doctest::Approx(ip.gamma).epsilon(1e-4));
            }
        }
    }
}

TEST_CASE("radial density and velocity slope") {
    SUBCASE("initial values") {
        const IsotropicConfig cfg = make_config(2, 1.0, "3*exp(-x)", "1+0.3*x");
        const RadialState s = solution_multid(cfg, 1.0, 0.0);
        CHECK(s.n == doctest::Approx(3.0 * std::exp(-1.0)).epsilon(1e-12));
        CHECK(s.u_r == doctest::Approx(0.3).epsilon(1e-12));
    }
    SUBCASE("planar closed form") {
        const IsotropicConfig cfg = make_config(0, 1.0, "1", "1");
        for (double t : {0.5, 2.0}) {
            const RadialState s = solution_multid(cfg, 1.0, t);
            CHECK(s.n == doctest::Approx(1.0 / (1.0 + 0.5 * t * t)).epsilon(1e-9));
        }
    }
    SUBCASE("past blow-up raises with a bracket") {
        // du0(1) ~ -1.22 while sqrt(2 k n0) ~ 0.14: the planar indicator
        // 1 + du0 t + k n0 t^2/2 crosses zero near t ~ 0.82.
        const IsotropicConfig cfg = make_config(0, 1.0, "0.01", "3-2.9*tanh(x)");
        CHECK_THROWS_AS(solution_multid(cfg, 1.0, 100.0), BlowupError);
    }
}
