#include "epcrit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace epcrit {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

// ============================================================================
// find_root: Brent's method
// ============================================================================

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& opts) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (!finite(fa) || !finite(fb))
        throw NumericsError("find_root: non-finite value at bracket endpoint");
    if (fa == 0.0 && fb == 0.0)
        throw NumericsError("find_root: degenerate bracket, f vanishes at both endpoints");
    if (fa * fb >= 0.0)
        throw NumericsError("find_root: no sign change on bracket");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b)
                          + 0.5 * (opts.abs_tol + opts.rel_tol * std::abs(b));
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // Attempt inverse quadratic / secant interpolation.
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if (!finite(fb)) throw NumericsError("find_root: non-finite value during search");
        if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; d = b - a; e = d; }
    }
    throw NumericsError("find_root: iteration budget exhausted");
}

// ============================================================================
// quad: adaptive Gauss-Kronrod 7/15
// ============================================================================

namespace {

// 15-point Kronrod abscissae (positive half) and weights; the embedded
// 7-point Gauss rule uses the odd-indexed nodes.
constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * kKronrodX[i];
        const double fl = f(mid - dx);
        const double fr = (i == 7) ? fl : f(mid + dx);
        const double pair = (i == 7) ? fl : fl + fr;
        kron += kKronrodW[i] * pair;
        if (i % 2 == 1) gauss += kGaussW[i / 2] * pair;
    }
    kron *= half;
    gauss *= half;
    double err = std::abs(kron - gauss);
    // Standard sharpening of the raw difference estimate.
    if (err > 0.0) err = std::pow(200.0 * err, 1.5) * std::min(1.0, 1.0 / (200.0 * std::sqrt(200.0 * err)));
    err = std::max(err, std::abs(kron) * 1e-16);
    return {a, b, kron, std::max(err, std::abs(kron - gauss))};
}

}  // namespace

double quad(const std::function<double(double)>& f, double a, double b,
            const QuadOptions& opts) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (b < a) { std::swap(a, b); sign = -1.0; }

    // Graded mode: substitute x = end -/+ w s^2 toward the flagged endpoint.
    // The Jacobian 2 w s regularizes square-root endpoint singularities
    // outright and softens stronger integrable ones; a sample whose abscissa
    // rounds onto the endpoint itself contributes the mass of a sub-ulp
    // sliver, which is zero at any realistic tolerance.
    if (opts.graded != GradedEnd::None) {
        const double w = b - a;
        const bool upper = (opts.graded == GradedEnd::Upper);
        auto g = [&](double s) {
            const double x = upper ? b - w * s * s : a + w * s * s;
            const double v = 2.0 * w * s * f(x);
            return finite(v) ? v : 0.0;
        };
        QuadOptions inner = opts;
        inner.graded = GradedEnd::None;
        return sign * quad(g, 0.0, 1.0, inner);
    }

    std::vector<Panel> panels;
    {
        Panel p = gk15(f, a, b);
        if (!finite(p.value))
            throw NumericsError("quad: integrand evaluated to a non-finite value");
        panels.push_back(p);
    }

    double total = 0.0, toterr = 0.0;
    for (const Panel& p : panels) { total += p.value; toterr += p.error; }

    while (toterr > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if ((int)panels.size() >= opts.max_intervals) {
            auto worst = std::max_element(panels.begin(), panels.end(),
                [](const Panel& x, const Panel& y) { return x.error < y.error; });
            throw NumericsError("quad: interval budget exhausted, worst subinterval ["
                                + std::to_string(worst->a) + ", " + std::to_string(worst->b)
                                + "] error " + std::to_string(worst->error));
        }
        auto worst = std::max_element(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.error < y.error; });
        const Panel w = *worst;
        const double mid = 0.5 * (w.a + w.b);
        if (!(mid > w.a && mid < w.b))
            throw NumericsError("quad: subinterval collapsed below machine resolution");
        Panel left = gk15(f, w.a, mid);
        Panel right = gk15(f, mid, w.b);
        if (!finite(left.value) || !finite(right.value))
            throw NumericsError("quad: integrand evaluated to a non-finite value");
        total += left.value + right.value - w.value;
        toterr += left.error + right.error - w.error;
        *worst = left;
        panels.push_back(right);
    }
    return sign * total;
}

// ============================================================================
// integrate: Dormand-Prince 5(4)
// ============================================================================

namespace {

// Butcher tableau of the DOPRI5 pair.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double A71 = 35.0 / 384, A73 = 500.0 / 1113, A74 = 125.0 / 192,
                 A75 = -2187.0 / 6784, A76 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
// Coefficients of the quartic dense-output polynomial.
constexpr double D1 = -12715105075.0 / 11282082432.0;
constexpr double D3 = 87487479700.0 / 32700410799.0;
constexpr double D4 = -10690763975.0 / 1880347072.0;
constexpr double D5 = 701980252875.0 / 199316789632.0;
constexpr double D6 = -1453857185.0 / 822651844.0;
constexpr double D7 = 69997945.0 / 29380423.0;

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

const Trajectory::DenseStep& Trajectory::locate(double t) const {
    if (steps_.empty()) throw NumericsError("trajectory: empty dense output");
    // Binary search for the step containing t.
    size_t lo = 0, hi = steps_.size() - 1;
    while (lo < hi) {
        const size_t mid = (lo + hi + 1) / 2;
        if (steps_[mid].t <= t) lo = mid; else hi = mid - 1;
    }
    return steps_[lo];
}

std::vector<double> Trajectory::eval(double t) const {
    const double slack = 1e-9 * (1.0 + std::abs(t_end_));
    if (t < std::min(t_begin_, t_end_) - slack || t > std::max(t_begin_, t_end_) + slack)
        throw NumericsError("trajectory: evaluation time outside integrated span");
    t = std::clamp(t, std::min(t_begin_, t_end_), std::max(t_begin_, t_end_));
    const DenseStep& s = locate(t);
    const double th = (s.h != 0.0) ? (t - s.t) / s.h : 0.0;
    const double th1 = 1.0 - th;
    std::vector<double> y(dim_);
    for (int i = 0; i < dim_; ++i) {
        const double* r = s.rcont.data() + 5 * i;
        y[i] = r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
    }
    return y;
}

double Trajectory::eval_component(double t, int i) const { return eval(t)[i]; }

Trajectory integrate(const IvpSpec& spec) {
    const int n = (int)spec.y0.size();
    if (n == 0) throw NumericsError("integrate: empty state");
    if (!(spec.rel_tol > 0) || !(spec.abs_tol > 0))
        throw NumericsError("integrate: tolerances must be positive");
    const double dir = (spec.t1 >= spec.t0) ? 1.0 : -1.0;
    const double span = std::abs(spec.t1 - spec.t0);

    Trajectory traj;
    traj.dim_ = n;
    traj.t_begin_ = spec.t0;
    traj.nodes_.push_back(spec.t0);

    std::vector<double> y = spec.y0, ynew(n), err(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), work(n);
    auto f = [&](double t, const std::vector<double>& yy, std::vector<double>& out) {
        spec.rhs(t, yy, out);
    };
    f(spec.t0, y, k1);
    for (double v : k1)
        if (!finite(v)) throw NumericsError("integrate: RHS non-finite at initial state");

    // Starting step size: scale-aware variant of the usual two-derivative probe.
    double h;
    {
        double d0 = 0, d1 = 0;
        for (int i = 0; i < n; ++i) {
            const double sc = spec.abs_tol + spec.rel_tol * std::abs(y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sc);
            d1 = std::max(d1, std::abs(k1[i]) / sc);
        }
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, span);
        for (int i = 0; i < n; ++i) work[i] = y[i] + dir * h0 * k1[i];
        f(spec.t0 + dir * h0, work, k2);
        double d2 = 0;
        for (int i = 0; i < n; ++i) {
            const double sc = spec.abs_tol + spec.rel_tol * std::abs(y[i]);
            d2 = std::max(d2, std::abs(k2[i] - k1[i]) / sc / h0);
        }
        double h1 = (std::max(d1, d2) <= 1e-15)
                        ? std::max(1e-6, h0 * 1e-3)
                        : std::pow(0.01 / std::max(d1, d2), 0.2);
        h = std::min({100.0 * h0, h1, span});
        if (spec.max_step > 0) h = std::min(h, spec.max_step);
    }

    double t = spec.t0;
    std::vector<double> gprev;
    for (const Event& ev : spec.events) gprev.push_back(ev.g(t, y));

    const long max_steps = 20'000'000;
    long steps_taken = 0;
    bool last = false;

    while (true) {
        if (std::abs(t - spec.t1) <= 1e-14 * (1.0 + std::abs(spec.t1))) break;
        if (++steps_taken > max_steps)
            throw NumericsError("integrate: step budget exhausted");
        if (h > std::abs(spec.t1 - t)) { h = std::abs(spec.t1 - t); last = true; }
        const double hmin = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (h < hmin) {
            traj.status = IvpStatus::StepUnderflow;
            break;
        }
        const double hd = dir * h;

        for (int i = 0; i < n; ++i) work[i] = y[i] + hd * A21 * k1[i];
        f(t + 0.2 * hd, work, k2);
        for (int i = 0; i < n; ++i) work[i] = y[i] + hd * (A31 * k1[i] + A32 * k2[i]);
        f(t + 0.3 * hd, work, k3);
        for (int i = 0; i < n; ++i) work[i] = y[i] + hd * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        f(t + 0.8 * hd, work, k4);
        for (int i = 0; i < n; ++i)
            work[i] = y[i] + hd * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        f(t + (8.0 / 9.0) * hd, work, k5);
        for (int i = 0; i < n; ++i)
            work[i] = y[i] + hd * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        f(t + hd, work, k6);
        for (int i = 0; i < n; ++i)
            ynew[i] = y[i] + hd * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        f(t + hd, ynew, k7);

        bool bad = false;
        double errnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!finite(ynew[i])) { bad = true; break; }
            const double e = hd * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                                   + E6 * k6[i] + E7 * k7[i]);
            const double sc = spec.abs_tol
                            + spec.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            errnorm += (e / sc) * (e / sc);
        }
        errnorm = bad ? 1e6 : std::sqrt(errnorm / n);

        if (errnorm > 1.0) {
            // Reject and retry with a smaller step.
            const double fac = std::max(0.2, 0.9 * std::pow(errnorm, -0.2));
            h *= std::min(fac, 0.9);
            last = false;
            continue;
        }

        // Accepted: store the dense-output coefficients for this step.
        Trajectory::DenseStep ds;
        ds.t = t;
        ds.h = hd;
        ds.rcont.resize(5 * n);
        for (int i = 0; i < n; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = hd * k1[i] - ydiff;
            double* r = ds.rcont.data() + 5 * i;
            r[0] = y[i];
            r[1] = ydiff;
            r[2] = bspl;
            r[3] = ydiff - hd * k7[i] - bspl;
            r[4] = hd * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        traj.steps_.push_back(std::move(ds));
        const double tnew = t + hd;
        traj.nodes_.push_back(tnew);
        traj.t_end_ = tnew;  // keep the span current: event scans evaluate inside this step

        // Event handling. A sign change across the step is refined on the
        // dense interpolant. When both endpoints agree in sign, the interior
        // extremum working against that sign is located by golden-section
        // search, so a crossing-and-return contained in one step is reported
        // too. (Polynomial solutions have vanishing local error, which lets
        // the step size grow without bound; endpoint sampling alone would
        // then leap over a narrow dip through zero.)
        struct Hit { double t; int index; bool halt; };
        std::vector<Hit> hits;
        if (!spec.events.empty()) {
            for (size_t e = 0; e < spec.events.size(); ++e) {
                auto geval = [&](double tt) {
                    return spec.events[e].g(tt, traj.eval(tt));
                };
                const double g0 = gprev[e];
                const double g1 = spec.events[e].g(tnew, ynew);
                const RootOptions ropt{1e-12, 1e-12};
                if (g0 != 0.0 && g1 == 0.0) {
                    hits.push_back({tnew, (int)e, spec.events[e].halt});
                } else if (g0 * g1 < 0.0) {
                    hits.push_back(
                        {find_root(geval, t, tnew, ropt), (int)e, spec.events[e].halt});
                } else if (g0 != 0.0 && g1 != 0.0) {
                    const double s = g0 > 0.0 ? 1.0 : -1.0;
                    const double invphi = 0.6180339887498949;
                    double lo = t, hi = tnew;
                    double m1 = hi - invphi * (hi - lo), m2 = lo + invphi * (hi - lo);
                    double f1 = s * geval(m1), f2 = s * geval(m2);
                    for (int it = 0; it < 90 && hi - lo > 1e-14 * (1.0 + std::abs(hi));
                         ++it) {
                        if (f1 <= f2) {
                            hi = m2; m2 = m1; f2 = f1;
                            m1 = hi - invphi * (hi - lo);
                            f1 = s * geval(m1);
                        } else {
                            lo = m1; m1 = m2; f1 = f2;
                            m2 = lo + invphi * (hi - lo);
                            f2 = s * geval(m2);
                        }
                    }
                    const double tdip = 0.5 * (lo + hi);
                    const double gdip = geval(tdip);
                    if (s * gdip < 0.0) {
                        hits.push_back(
                            {find_root(geval, t, tdip, ropt), (int)e, spec.events[e].halt});
                        hits.push_back(
                            {find_root(geval, tdip, tnew, ropt), (int)e, spec.events[e].halt});
                    } else if (gdip == 0.0) {
                        hits.push_back({tdip, (int)e, spec.events[e].halt});
                    }
                }
                gprev[e] = g1;
            }
        }
        std::sort(hits.begin(), hits.end(),
                  [dir](const Hit& a, const Hit& b) { return dir * (a.t - b.t) < 0; });
        bool halted = false;
        for (const Hit& hit : hits) {
            traj.events.push_back({hit.index, hit.t, traj.eval(hit.t)});
            if (hit.halt) {
                traj.status = IvpStatus::EventHalt;
                traj.t_end_ = hit.t;
                traj.y_end_ = traj.eval(hit.t);
                halted = true;
                break;
            }
        }
        if (halted) return traj;

        t = tnew;
        y.swap(ynew);
        k1.swap(k7);  // FSAL

        if (inf_norm(y) > spec.blowup_norm) {
            traj.status = IvpStatus::Blowup;
            traj.blowup_lo = t - hd;
            traj.blowup_hi = t;
            traj.t_end_ = t;
            traj.y_end_ = y;
            return traj;
        }

        if (last) break;
        double fac = 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2);
        fac = std::clamp(fac, 0.2, 10.0);
        h *= fac;
        if (spec.max_step > 0) h = std::min(h, spec.max_step);
    }

    traj.t_end_ = t;
    traj.y_end_ = y;
    if (traj.steps_.empty()) {
        // Degenerate zero-length span: synthesize a constant segment.
        Trajectory::DenseStep ds;
        ds.t = t;
        ds.h = 0.0;
        ds.rcont.assign(5 * n, 0.0);
        for (int i = 0; i < n; ++i) ds.rcont[5 * i] = y[i];
        traj.steps_.push_back(std::move(ds));
    }
    return traj;
}

}  // namespace epcrit
