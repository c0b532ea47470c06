#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "epcrit/flowmap.hpp"
#include "epcrit/profiles.hpp"
#include "epcrit/thresholds1d.hpp"
#include "epcrit/trace.hpp"

using namespace epcrit;

namespace {

InitialData line_data(const std::string& rho0, const std::string& u0) {
    InitialData d;
    d.rho0 = ScalarProfile(rho0, Domain::FullLine);
    d.u0 = ScalarProfile(u0, Domain::FullLine);
    return d;
}

InitialData wall_data(const std::string& rho0, const std::string& u0) {
    InitialData d;
    d.rho0 = ScalarProfile(rho0, Domain::HalfLine);
    d.u0 = ScalarProfile(u0, Domain::HalfLine);
    return d;
}

IsotropicConfig make_config(int nu, double k, const std::string& n0,
                            const std::string& u0) {
    InitialData d;
    d.rho0 = ScalarProfile(n0, Domain::HalfLine);
    d.u0 = ScalarProfile(u0, Domain::HalfLine);
    return IsotropicConfig(nu, k, d);
}

}  // namespace

TEST_CASE("trace_1d samples characteristics of the line models") {
    SUBCASE("initial row and uniform sampling") {
        const Model1D model = ZeroBackground{1.0};
        const InitialData data = line_data("1/(1+x^2)", "0.5*x");
        const double a = 0.8;
        const TraceResult res = trace_1d(model, data, a, 2.0, 9);

        CHECK(!res.blowup_bracket.has_value());
        REQUIRE(res.rows.size() == 9);
        for (size_t j = 0; j < res.rows.size(); ++j)
            CHECK(res.rows[j].t ==
                  doctest::Approx(2.0 * static_cast<double>(j) / 8.0).epsilon(1e-15));

        const TraceRow& first = res.rows.front();
        CHECK(first.t == 0.0);
        CHECK(first.r == doctest::Approx(a).epsilon(1e-14));
        CHECK(first.u == doctest::Approx(0.4).epsilon(1e-14));
        CHECK(first.gamma == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(first.gamma_t == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(first.n == doctest::Approx(1.0 / 1.64).epsilon(1e-13));
        CHECK(first.u_r == doctest::Approx(0.5).epsilon(1e-13));
    }

    SUBCASE("linear data rides the closed forms") {
        // rho0 = 1/2, u0 = x/4: Gamma = 1 + t/4 + t^2/4 and the trajectory is
        // self-similar, x(alpha, t) = alpha Gamma(t).
        const Model1D model = ZeroBackground{1.0};
        const InitialData data = line_data("0.5", "0.25*x");
        const double a = 1.2;
        const TraceResult res = trace_1d(model, data, a, 4.0, 7);

        REQUIRE(res.rows.size() == 7);
        for (const TraceRow& row : res.rows) {
            const double g = 1.0 + 0.25 * row.t + 0.25 * row.t * row.t;
            const double gt = 0.25 + 0.5 * row.t;
            CHECK(row.gamma == doctest::Approx(g).epsilon(1e-12));
            CHECK(row.gamma_t == doctest::Approx(gt).epsilon(1e-12));
            CHECK(row.r == doctest::Approx(a * g).epsilon(1e-9));
            CHECK(row.u == doctest::Approx(a * gt).epsilon(1e-9));
            CHECK(row.n == doctest::Approx(0.5 / g).epsilon(1e-12));
            CHECK(row.u_r == doctest::Approx(gt / g).epsilon(1e-12));
        }
    }

    SUBCASE("gradient catastrophe truncates the series") {
        const Model1D model = ZeroBackground{1.0};
        const InitialData data = wall_data("1", "-3*x");
        const double a = 0.5;
        const double t_star = 3.0 - std::sqrt(7.0);
        const TraceResult res = trace_1d(model, data, a, 1.0, 11);

        REQUIRE(res.blowup_bracket.has_value());
        const auto [lo, hi] = *res.blowup_bracket;
        CHECK(lo <= t_star);
        CHECK(hi >= t_star);
        CHECK(hi - lo < 1e-9);

        REQUIRE(!res.rows.empty());
        double prev = -1.0;
        for (const TraceRow& row : res.rows) {
            CHECK(row.gamma > 0.0);
            CHECK(row.t > prev);
            prev = row.t;
            const double g = 1.0 - 3.0 * row.t + 0.5 * row.t * row.t;
            CHECK(row.gamma == doctest::Approx(g).epsilon(1e-9));
            CHECK(row.r == doctest::Approx(a * g).epsilon(1e-9));
            CHECK(row.u == doctest::Approx(a * (-3.0 + row.t)).epsilon(1e-9));
        }
        // The final row hugs the singularity: the density and the velocity
        // gradient have already exploded there.
        const TraceRow& last = res.rows.back();
        CHECK(last.t > 0.999 * t_star);
        CHECK(last.t < lo);
        CHECK(last.n > 1e6);
        CHECK(last.u_r < -1e6);
    }

    SUBCASE("oscillatory background returns to the start") {
        // rho0 equal to the background level: Gamma = 1 + d0 sin t, and the
        // characteristic orbits close after one period 2 pi.
        const Model1D model = ConstantBackground{1.0, 1.0};
        const InitialData data = line_data("1", "0.3*x");
        const double a = 0.7;
        const double t_end = 2.0 * M_PI;
        const TraceResult res = trace_1d(model, data, a, t_end, 9);

        CHECK(!res.blowup_bracket.has_value());
        REQUIRE(res.rows.size() == 9);
        for (const TraceRow& row : res.rows) {
            const double g = 1.0 + 0.3 * std::sin(row.t);
            CHECK(row.gamma == doctest::Approx(g).epsilon(1e-12));
            // Phase-plane invariant of Gamma'' + Gamma = 1.
            const double e = (row.gamma - 1.0) * (row.gamma - 1.0) + row.gamma_t * row.gamma_t;
            CHECK(e == doctest::Approx(0.09).epsilon(1e-10));
            // rho0 - c vanishes identically, so the field stays zero and the
            // velocity is a pure cosine.
            CHECK(row.u == doctest::Approx(0.21 * std::cos(row.t)).epsilon(1e-8));
            CHECK(row.r == doctest::Approx(a + 0.21 * std::sin(row.t)).epsilon(1e-8));
        }
        const TraceRow& last = res.rows.back();
        CHECK(last.t == doctest::Approx(t_end).epsilon(1e-15));
        CHECK(last.r == doctest::Approx(a).epsilon(1e-8));
        CHECK(last.u == doctest::Approx(0.21).epsilon(1e-7));
    }

    SUBCASE("relaxation spirals the characteristic back to its label") {
        // rho0 == c, so E(0) = 0 and the velocity obeys the homogeneous
        // damped oscillator u'' + u'/eps + c k u = 0 with u'(0) = -u0/eps.
        const Model1D model = RelaxationWeak{1.0, 1.0, 1.0};
        const InitialData data = wall_data("1", "0.6*x");
        const double a = 1.5;
        const double mu = std::sqrt(3.0) / 2.0;
        const double A = 0.9;        // u0(a)
        const double B = -0.45 / mu; // (u'(0) + A/2) / mu
        const TraceResult res = trace_1d(model, data, a, 6.0, 13);

        CHECK(!res.blowup_bracket.has_value());
        REQUIRE(res.rows.size() == 13);
        for (const TraceRow& row : res.rows) {
            const double t = row.t;
            const double ex = std::exp(-0.5 * t);
            const double cs = std::cos(mu * t), sn = std::sin(mu * t);
            const double u = ex * (A * cs + B * sn);
            // Antiderivative of u; the eigenvalue moduli square to one.
            const double x = a + A * (ex * (-0.5 * cs + mu * sn) + 0.5) +
                             B * (ex * (-0.5 * sn - mu * cs) + mu);
            CHECK(row.u == doctest::Approx(u).epsilon(1e-8));
            CHECK(row.r == doctest::Approx(x).epsilon(1e-8));
            const double g = 1.0 + 0.6 * ex * sn / mu;
            CHECK(row.gamma == doctest::Approx(g).epsilon(1e-10));
            CHECK(row.n * row.gamma == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(row.u_r * row.gamma == doctest::Approx(row.gamma_t).epsilon(1e-12));
        }
    }

    SUBCASE("even data keeps the center fixed") {
        const Model1D model = ZeroBackground{1.0};
        const InitialData data = line_data("1/(1+x^2)", "0");

        const TraceResult center = trace_1d(model, data, 0.0, 2.0, 5);
        REQUIRE(center.rows.size() == 5);
        for (const TraceRow& row : center.rows) {
            CHECK(std::abs(row.r) < 1e-10);
            CHECK(std::abs(row.u) < 1e-10);
            CHECK(row.gamma == doctest::Approx(1.0 + 0.5 * row.t * row.t).epsilon(1e-12));
        }

        // Off center the symmetric gauge gives E0(alpha) = atan(alpha),
        // independent of the truncation length.
        const TraceResult off = trace_1d(model, data, 1.0, 2.0, 5);
        const TraceRow& last = off.rows.back();
        CHECK(last.t == doctest::Approx(2.0));
        CHECK(last.u == doctest::Approx(M_PI / 4.0 * 2.0).epsilon(1e-9));
        CHECK(last.r == doctest::Approx(1.0 + M_PI / 8.0 * 4.0).epsilon(1e-9));
    }

    SUBCASE("labels and horizons are validated") {
        const Model1D model = ZeroBackground{1.0};
        const InitialData data = line_data("1/(1+x^2)", "0");
        CHECK_THROWS_AS(trace_1d(model, data, 5.0, 1.0, 4, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(trace_1d(model, data, 0.5, 0.0, 4), std::invalid_argument);
        CHECK_THROWS_AS(trace_1d(model, data, 0.5, 1.0, 0), std::invalid_argument);

        const TraceResult single = trace_1d(model, data, 0.5, 1.0, 1);
        REQUIRE(single.rows.size() == 1);
        CHECK(single.rows.front().t == 0.0);
    }
}

TEST_CASE("trace_multid samples radial characteristics") {
    SUBCASE("slab geometry matches the quadratic forms") {
        const IsotropicConfig cfg = make_config(0, 1.0, "1", "5-3*x");
        const double a = 0.5;
        const double t_star = 3.0 - std::sqrt(7.0);
        const TraceResult res = trace_multid(cfg, a, 1.0, 21);

        REQUIRE(res.blowup_bracket.has_value());
        const auto [lo, hi] = *res.blowup_bracket;
        CHECK(lo < t_star + 1e-9);
        CHECK(hi > t_star - 1e-9);
        CHECK(hi - lo < 1e-8);

        REQUIRE(!res.rows.empty());
        for (const TraceRow& row : res.rows) {
            CHECK(row.gamma > 0.0);
            const double t = row.t;
            CHECK(row.gamma == doctest::Approx(1.0 - 3.0 * t + 0.5 * t * t).epsilon(1e-8));
            CHECK(row.r == doctest::Approx(0.5 + 3.5 * t + 0.25 * t * t).epsilon(1e-8));
            CHECK(row.u == doctest::Approx(3.5 + 0.5 * t).epsilon(1e-8));
        }
        CHECK(res.rows.back().t > 0.99 * t_star);
        CHECK(res.rows.front().n == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("radial conservation and initial density") {
        const IsotropicConfig cfg = make_config(2, 1.0, "3", "1");
        const double a = 1.0;
        const TraceResult res = trace_multid(cfg, a, 5.0, 9);

        CHECK(!res.blowup_bracket.has_value());
        REQUIRE(res.rows.size() == 9);
        CHECK(res.rows.front().n == doctest::Approx(3.0).epsilon(1e-10));
        double prev_r = 0.0;
        for (const TraceRow& row : res.rows) {
            CHECK(row.r > prev_r);
            prev_r = row.r;
            // Mass factor n r^2 Gamma is conserved along the characteristic.
            CHECK(row.n * row.r * row.r * row.gamma == doctest::Approx(3.0).epsilon(1e-8));
            CHECK(row.u_r * row.gamma == doctest::Approx(row.gamma_t).epsilon(1e-10));
        }
    }

    SUBCASE("expanding monatomic shell") {
        // nu = 3, e0(1) = 1, u0 = 1: r = sqrt(1 + 2t + 2t^2) and
        // Gamma = (1 + t + t^2) / r in closed form.
        const IsotropicConfig cfg = make_config(3, 1.0, "4", "1");
        const TraceResult res = trace_multid(cfg, 1.0, 3.0, 7);

        CHECK(!res.blowup_bracket.has_value());
        REQUIRE(res.rows.size() == 7);
        for (const TraceRow& row : res.rows) {
            const double t = row.t;
            const double r = std::sqrt(1.0 + 2.0 * t + 2.0 * t * t);
            const double g = (1.0 + t + t * t) / r;
            CHECK(row.r == doctest::Approx(r).epsilon(1e-7));
            CHECK(row.u == doctest::Approx((1.0 + 2.0 * t) / r).epsilon(1e-7));
            CHECK(row.gamma == doctest::Approx(g).epsilon(1e-7));
            CHECK(row.n == doctest::Approx(4.0 / (r * r * r * g)).epsilon(1e-7));
        }
    }

    SUBCASE("spherical collapse truncates the series") {
        const IsotropicConfig cfg = make_config(2, 1.0, "0.01", "3-2.9*tanh(x)");
        const TraceResult res = trace_multid(cfg, 1.0, 10.0, 41);

        REQUIRE(res.blowup_bracket.has_value());
        REQUIRE(!res.rows.empty());
        for (const TraceRow& row : res.rows) CHECK(row.gamma > 0.0);
        CHECK(res.rows.back().t < (*res.blowup_bracket)[0]);
        CHECK(res.rows.back().n > 1.0);  // piled up from n(0) = 0.01
        CHECK(res.rows.back().u_r < -1e3);
    }

    SUBCASE("horizon and sample validation") {
        const IsotropicConfig cfg = make_config(2, 1.0, "3", "1");
        CHECK_THROWS_AS(trace_multid(cfg, 1.0, -1.0, 4), std::invalid_argument);
        CHECK_THROWS_AS(trace_multid(cfg, 1.0, 1.0, 0), std::invalid_argument);
    }
}
