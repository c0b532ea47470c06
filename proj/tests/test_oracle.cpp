#include "epcrit/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace epcrit;

TEST_CASE("equilibrium of the forced oscillator stays put") {
    // G'' + G = 1 with G(0)=1, G'(0)=0 has the constant solution G = 1.
    IvpSpec spec;
    spec.rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = 1.0 - y[0];
    };
    spec.y0 = {1.0, 0.0};
    spec.t1 = 25.0;
    const Trajectory tr = integrate(spec);
    REQUIRE(tr.status == IvpStatus::Done);
    CHECK(tr.eval_component(12.5, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(tr.final_state()[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(tr.final_state()[1]) < 1e-10);
}

TEST_CASE("central-force benchmark r'' = 1/r^3") {
    // Closed form r(t) = sqrt(1 + t^2).
    IvpSpec spec;
    spec.rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = 1.0 / (y[0] * y[0] * y[0]);
    };
    spec.y0 = {1.0, 0.0};
    spec.t1 = 10.0;
    const Trajectory tr = integrate(spec);
    REQUIRE(tr.status == IvpStatus::Done);
    const double exact = std::sqrt(1.0 + 100.0);
    CHECK(std::abs(tr.final_state()[0] - exact) / exact < 1e-9);

    // Convergence order: a much looser tolerance must give a visibly larger
    // error, and tightening must win by orders of magnitude.
    IvpSpec loose = spec;
    loose.rel_tol = 1e-4;
    loose.abs_tol = 1e-6;
    const double err_loose = std::abs(integrate(loose).final_state()[0] - exact);
    IvpSpec tight = spec;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    const double err_tight = std::abs(integrate(tight).final_state()[0] - exact);
    CHECK(err_tight < err_loose);
    CHECK(err_tight < 1e-10);
}

TEST_CASE("event location on a quadratic crossing") {
    // G'' = 1, G(0)=1, G'(0)=-3: G(t) = 1 - 3t + t^2/2 first hits zero at 3 - sqrt(7).
    IvpSpec spec;
    spec.rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = 1.0;
    };
    spec.y0 = {1.0, -3.0};
    spec.t1 = 2.0;
    spec.events.push_back(Event{[](double, const std::vector<double>& y) { return y[0]; }, true});
    const Trajectory tr = integrate(spec);
    REQUIRE(tr.status == IvpStatus::EventHalt);
    REQUIRE(tr.events.size() == 1);
    const double expect = 0.35424868893540927;  // 3 - sqrt(7)
    CHECK(std::abs(tr.events[0].t - expect) < 1e-12);

    // Event time should not depend on how the integrator happened to step.
    IvpSpec other = spec;
    other.max_step = 0.0137;
    const Trajectory tr2 = integrate(other);
    REQUIRE(tr2.status == IvpStatus::EventHalt);
    CHECK(std::abs(tr2.events[0].t - tr.events[0].t) < 1e-10);
}

TEST_CASE("blow-up guard halts with a bracket") {
    // y' = y^2 from y(0)=1 blows up at t = 1.
    IvpSpec spec;
    spec.rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[0] * y[0];
    };
    spec.y0 = {1.0};
    spec.t1 = 2.0;
    const Trajectory tr = integrate(spec);
    CHECK(tr.status == IvpStatus::Blowup);
    CHECK(tr.blowup_lo <= 1.0);
    CHECK(tr.t_end() < 1.0 + 1e-6);
}

TEST_CASE("dense output is consistent with re-integration") {
    IvpSpec spec;
    spec.rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    spec.y0 = {0.0, 1.0};
    spec.t1 = 6.0;
    const Trajectory tr = integrate(spec);
    for (double t : {0.5, 1.7, 3.9, 5.99}) {
        CHECK(tr.eval_component(t, 0) == doctest::Approx(std::sin(t)).epsilon(1e-9));
        CHECK(tr.eval_component(t, 1) == doctest::Approx(std::cos(t)).epsilon(1e-9));
    }
}

TEST_CASE("find_root basics") {
    CHECK(find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    // Tight cluster: cubic with a root at 0.3.
    CHECK(find_root([](double x) { return (x - 0.3) * (x * x + 1); }, 0.0, 1.0) ==
          doctest::Approx(0.3).epsilon(1e-13));
    // No sign change must error, not return a fake root.
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), NumericsError);
    // Degenerate zero-at-endpoint input is rejected as well.
    CHECK_THROWS_AS(find_root([](double) { return 0.0; }, 0.0, 1.0), NumericsError);
}

TEST_CASE("quadrature: smooth, scaled, and endpoint-singular") {
    CHECK(quad([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(quad([](double x) { return std::exp(-x); }, 0.0, 30.0) ==
          doctest::Approx(1.0 - std::exp(-30.0)).epsilon(1e-10));

    QuadOptions opt;
    opt.graded = GradedEnd::Upper;
    CHECK(quad([](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0.0, 1.0, opt) ==
          doctest::Approx(2.0).epsilon(1e-8));

    QuadOptions lower;
    lower.graded = GradedEnd::Lower;
    CHECK(quad([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, lower) ==
          doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("quad agrees with an independent midpoint refinement") {
    auto f = [](double x) { return std::sin(3 * x) * std::exp(-x * x); };
    const double v = quad(f, -1.0, 2.0);
    // Composite midpoint with Richardson step as a second, lower-order rule.
    auto midpoint = [&](int n) {
        const double h = 3.0 / n;
        double s = 0;
        for (int i = 0; i < n; ++i) s += f(-1.0 + (i + 0.5) * h);
        return s * h;
    };
    const double m1 = midpoint(1 << 12), m2 = midpoint(1 << 13);
    const double richardson = m2 + (m2 - m1) / 3.0;
    CHECK(v == doctest::Approx(richardson).epsilon(1e-9));
}
