#include "epcrit/riccati.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace epcrit {
namespace {

// State (y, z) with y = exp(I_a) and z = I_B, so that y' = a y, z' = b y.
// Products are forced to zero at isolated non-finite samples: an integrable
// singularity of a (or b) can coincide with y -> 0, and the limit of the
// product is what the quadrature actually needs.
Rhs make_rhs(const RiccatiProblem& p) {
    return [&p](double t, const std::vector<double>& y, std::vector<double>& dy) {
        double ay = p.a(t) * y[0];
        double by = p.b(t) * y[0];
        dy[0] = std::isfinite(ay) ? ay : 0.0;
        dy[1] = std::isfinite(by) ? by : 0.0;
    };
}

// Tight bracket around an event time located by the integrator's root polish
// (relative accuracy ~1e-12). Width stays below 1e-9 * t_hi.
std::array<double, 2> event_bracket(double te) {
    double pad = 2.5e-10 * std::abs(te) + 1e-15;
    return {te - pad, te + pad};
}

Trajectory integrate_pair(const RiccatiProblem& p, double t_end, bool with_event) {
    IvpSpec spec;
    spec.rhs = make_rhs(p);
    spec.y0 = {1.0, 0.0};
    spec.t0 = 0.0;
    spec.t1 = t_end;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-14;
    if (with_event) {
        double w0 = p.w0;
        spec.events.push_back(Event{
            [w0](double, const std::vector<double>& y) { return 1.0 - w0 * y[1]; },
            true});
    }
    return integrate(spec);
}

}  // namespace

double riccati_solution(const RiccatiProblem& p, double t) {
    if (!(t >= 0.0)) throw NumericsError("riccati_solution: time must be nonnegative");
    if (t == 0.0 || p.w0 == 0.0) return p.w0;

    Trajectory traj = integrate_pair(p, t, true);
    if (traj.status == IvpStatus::EventHalt) {
        double te = traj.events.front().t;
        auto br = event_bracket(te);
        throw BlowupError("riccati_solution: finite-time blow-up before requested time",
                          br[0], br[1]);
    }
    if (traj.status != IvpStatus::Done)
        throw NumericsError("riccati_solution: integration of the linear pair failed");

    const std::vector<double>& y = traj.final_state();
    double denom = 1.0 - p.w0 * y[1];
    if (denom <= 0.0) {
        auto br = event_bracket(t);
        throw BlowupError("riccati_solution: denominator vanished at requested time",
                          br[0], br[1]);
    }
    return p.w0 * y[0] / denom;
}

RiccatiScan riccati_scan(const RiccatiProblem& p, double horizon) {
    if (!(horizon > 0.0)) throw NumericsError("riccati_scan: horizon must be positive");

    RiccatiScan scan;
    if (p.w0 == 0.0) return scan;

    Trajectory traj = integrate_pair(p, horizon, true);
    if (traj.status == IvpStatus::EventHalt) {
        double te = traj.events.front().t;
        scan.global = false;
        scan.sup_integral = 1.0;
        scan.t_at_sup = te;
        scan.blowup_bracket = event_bracket(te);
        return scan;
    }
    if (traj.status != IvpStatus::Done)
        throw NumericsError("riccati_scan: integration of the linear pair failed");

    // Sample the running integral S(t) = w0 * I_B on a uniform grid, then
    // polish interior maxima (sign changes of S' = w0 * b * y) so a sharp
    // peak between grid nodes cannot be missed.
    auto S = [&](double t) { return p.w0 * traj.eval_component(t, 1); };
    auto dS = [&](double t) {
        double v = p.w0 * p.b(t) * traj.eval_component(t, 0);
        return std::isfinite(v) ? v : 0.0;
    };

    const int n = 1024;
    double best_t = 0.0, best = 0.0;
    double prev_slope = dS(0.0);
    double prev_t = 0.0;
    for (int i = 1; i <= n; ++i) {
        double t = horizon * static_cast<double>(i) / n;
        double s = S(t);
        if (s > best) { best = s; best_t = t; }
        double slope = dS(t);
        if (prev_slope > 0.0 && slope < 0.0) {
            RootOptions opts;
            double tc = find_root(dS, prev_t, t, opts);
            double sc = S(tc);
            if (sc > best) { best = sc; best_t = tc; }
        }
        prev_slope = slope;
        prev_t = t;
    }

    scan.sup_integral = best;
    scan.t_at_sup = best_t;
    if (best >= 1.0) {
        scan.global = false;
        scan.blowup_bracket = event_bracket(best_t);
    }
    return scan;
}

bool riccati_global(const RiccatiProblem& p, double horizon) {
    return riccati_scan(p, horizon).global;
}

}  // namespace epcrit
