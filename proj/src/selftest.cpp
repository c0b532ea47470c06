#include "epcrit/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "epcrit/flowmap.hpp"
#include "epcrit/oracle.hpp"
#include "epcrit/profiles.hpp"
#include "epcrit/thresholds1d.hpp"
#include "epcrit/thresholds_multid.hpp"
#include "epcrit/verdict.hpp"
#include "epcrit/viscous.hpp"

namespace epcrit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(std::uint64_t s) : rng(s) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }
};

struct Ctx {
    Sampler rng;
    double scale;
    bool bug;
    int checked = 0;
    int failed = 0;
    double worst_ratio = -1.0;
    std::string worst_what;
    std::string worst_config;

    int count(int full) const {
        return std::max(1, static_cast<int>(std::lround(full * scale)));
    }
    void metric(double err, double tol, const std::string& what, const std::string& cfg) {
        ++checked;
        double ratio = std::isfinite(err) ? err / tol : kInf;
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst_what = what + " = " + num(err) + " (tol " + num(tol) + ")";
            worst_config = cfg;
        }
        if (!(ratio <= 1.0)) ++failed;
    }
    void require(bool ok, const std::string& what, const std::string& cfg) {
        ++checked;
        if (!ok) {
            ++failed;
            worst_ratio = kInf;
            worst_what = what + " [failed]";
            worst_config = cfg;
        }
    }
};

InitialData make_data(const std::string& rho0, const std::string& u0,
                      Domain dom = Domain::FullLine) {
    InitialData d;
    d.rho0 = ScalarProfile(rho0, dom);
    d.u0 = ScalarProfile(u0, dom);
    return d;
}

InitialData const_data(double rho0, double d0) {
    return make_data(num(rho0), num(d0) + "*x");
}

// Independent indicator oracle: Gamma'' + Gamma'/eps + c k Gamma = k rho0,
// optionally halting at the first Gamma zero.
struct OscCoeffs {
    double k, c, inv_eps, rho0;
};

Trajectory oracle_indicator(const OscCoeffs& o, double d0, double t_end, bool halt) {
    IvpSpec s;
    s.rhs = [o](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = o.k * o.rho0 - o.c * o.k * y[0] - o.inv_eps * y[1];
    };
    s.y0 = {1.0, d0};
    s.t1 = t_end;
    s.rel_tol = 1e-12;
    s.abs_tol = 1e-14;
    s.events.push_back({[](double, const std::vector<double>& y) { return y[0]; }, halt});
    return integrate(s);
}

std::string flags_1d(const char* model, double k, const InitialData& d,
                     const char* extra = nullptr) {
    std::string s = std::string("threshold --model ") + model + " --k " + num(k) +
                    " --rho0 \"" + d.rho0.source() + "\" --u0 \"" + d.u0.source() + "\"";
    if (extra) s += std::string(" ") + extra;
    return s;
}

std::string flags_radial(int nu, double k, const InitialData& d, const AlphaGrid& g) {
    return "threshold --model radial --nu " + std::to_string(nu) + " --k " + num(k) +
           " --rho0 \"" + d.rho0.source() + "\" --u0 \"" + d.u0.source() +
           "\" --alpha-min " + num(g.alpha_min) + " --alpha-max " + num(g.alpha_max) +
           " --alpha-count " + std::to_string(g.count);
}

// ---------------------------------------------------------------------------
// 1. The viscous worked example: beta0 = -2 everywhere, breakdown bound at
//    2 - sqrt(2), confirmed by the indicator oracle at the center label.
// ---------------------------------------------------------------------------

void family_viscous_example(Ctx& c) {
    const auto t0 = std::chrono::steady_clock::now();
    InitialData data = make_data("1/(1+x^2)", "-2*atan(x)");
    const std::string cfg = flags_1d("viscous", 1.0, data);

    double beta_dev = 0.0;
    for (int i = 0; i <= 64; ++i) {
        const double x = -8.0 + 16.0 * i / 64.0;
        beta_dev = std::max(beta_dev,
                            std::abs(data.u0.deriv(x) / data.rho0.eval(x) + 2.0));
    }
    c.metric(beta_dev, 1e-12, "beta0 deviation from -2", cfg);

    const Verdict v = verdict_viscous(data, 1.0, AlphaGrid{-8.0, 8.0, 321});
    c.require(v.kind == VerdictKind::BreakdownSufficient && v.t_c.has_value(),
              "viscous verdict certifies breakdown with a bound", cfg);
    const double bound = 2.0 - std::sqrt(2.0);
    if (v.t_c) c.metric(std::abs(*v.t_c - bound), 1e-9, "bound vs 2 - sqrt(2)", cfg);

    const Trajectory tr = oracle_indicator({1.0, 0.0, 0.0, 1.0}, -2.0, 2.0, true);
    c.require(!tr.events.empty(), "indicator oracle crosses zero at the center", cfg);
    if (!tr.events.empty())
        c.metric(std::abs(tr.events.front().t - bound), 1e-4,
                 "oracle crossing vs bound", cfg);

    c.metric(seconds_since(t0), 1.0, "family runtime (s)", cfg);
}

// ---------------------------------------------------------------------------
// 2. Zero-background exact threshold vs oracle, including blow-up times.
// ---------------------------------------------------------------------------

void family_zero_background(Ctx& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = c.count(1000);
    for (int i = 0; i < n; ++i) {
        const double k = c.rng.log_uniform(0.05, 20.0);
        const double r0 = c.rng.log_uniform(0.05, 20.0);
        const double w = std::sqrt(2.0 * k * r0);
        double d0;
        do {
            d0 = c.rng.uniform(-2.2 * w, 2.2 * w);
        } while (std::abs(d0 + w) <= 1e-6);
        const double margin = d0 + w;

        const Model1D model = ZeroBackground(k);
        const InitialData data = const_data(r0, d0);
        const std::string cfg = flags_1d("zero-bg", k, data);
        const Verdict v = verdict_1d(model, data, AlphaGrid{0.0, 1.0, 9});

        const double t_vertex = std::max(0.0, -d0 / (k * r0));
        const double horizon = t_vertex + 5.0 * (1.0 + 1.0 / std::sqrt(k * r0));
        const Trajectory tr = oracle_indicator({k, 0.0, 0.0, r0}, d0, horizon, true);
        const bool oracle_blow = !tr.events.empty();

        if (margin > 0.0) {
            c.require(v.kind == VerdictKind::Global && !oracle_blow,
                      "global side agreement", cfg);
        } else {
            c.require(v.kind == VerdictKind::Breakdown && oracle_blow,
                      "breakdown side agreement", cfg);
            if (v.kind == VerdictKind::Breakdown && oracle_blow) {
                const double tc = blowup_time_1d(model, data, 0.3);
                c.metric(std::abs(tc - tr.events.front().t) / tc, 1e-6,
                         "t_c relative error vs oracle", cfg);
            }
        }

        // Pointwise indicator probe (carries the mutation hook).
        const double t_probe =
            0.62 * (oracle_blow ? tr.events.front().t : horizon);
        if (t_probe > 0.0) {
            double g_formula = gamma_1d(model, data, 0.3, t_probe).gamma;
            if (c.bug) g_formula = 1.0 + d0 * t_probe - 0.5 * k * r0 * t_probe * t_probe;
            const double g_oracle = tr.eval_component(t_probe, 0);
            c.metric(std::abs(g_formula - g_oracle), 1e-8 * (1.0 + std::abs(g_oracle)),
                     "indicator formula vs oracle", cfg);
        }
    }
    c.metric(seconds_since(t0), 30.0, "family runtime (s)", "");
}

// ---------------------------------------------------------------------------
// 3. Zero-background long-time decay: k t^2 rho / 2 -> 1 and t u_x / 2 -> 1.
// ---------------------------------------------------------------------------

void family_decay(Ctx& c) {
    const int n = c.count(20);
    for (int i = 0; i < n; ++i) {
        const double k = c.rng.log_uniform(0.1, 10.0);
        const double r0 = c.rng.log_uniform(0.1, 10.0);
        const double w = std::sqrt(2.0 * k * r0);
        const double d0 =
            c.rng.uniform(std::max(-0.8 * w, -5.0 * k * r0), std::min(3.0 * w, 5.0 * k * r0));
        const Model1D model = ZeroBackground(k);
        const InitialData data = const_data(r0, d0);
        const std::string cfg = flags_1d("zero-bg", k, data);

        const Verdict v = verdict_1d(model, data, AlphaGrid{0.0, 1.0, 9});
        c.require(v.kind == VerdictKind::Global, "sampled configuration is global", cfg);
        if (v.kind != VerdictKind::Global) continue;

        const double t = 1e3;
        const CharacteristicState st = solution_along_characteristic(model, data, 0.0, t);
        c.metric(std::abs(0.5 * k * t * t * st.rho - 1.0), 0.02, "k t^2 rho / 2 vs 1", cfg);
        c.metric(std::abs(0.5 * t * st.u_x - 1.0), 0.02, "t u_x / 2 vs 1", cfg);
    }
}

// ---------------------------------------------------------------------------
// 4. Constant-background thresholds vs oracle, both force signs.
// ---------------------------------------------------------------------------

void family_const_background(Ctx& c) {
    const int n = c.count(500);

    for (int i = 0; i < n; ++i) {  // oscillatory branch k > 0
        const double k = c.rng.log_uniform(0.05, 10.0);
        const double cc = c.rng.log_uniform(0.05, 10.0);
        const double r0 = c.rng.log_uniform(0.02, 20.0);
        const Model1D model = ConstantBackground(k, cc);
        double d0, margin;
        InitialData data;
        do {
            d0 = c.rng.uniform(-1.8, 1.8) * std::sqrt(k * (cc + 2.0 * r0));
            data = const_data(r0, d0);
            margin = margin_1d(model, data, 0.0);
        } while (std::abs(margin) <= 1e-9);
        const std::string cfg =
            flags_1d("const-bg", k, data, ("--c " + num(cc)).c_str());

        const Verdict v = verdict_1d(model, data, AlphaGrid{0.0, 1.0, 9});
        const double omega = std::sqrt(cc * k);
        const Trajectory tr =
            oracle_indicator({k, cc, 0.0, r0}, d0, 1.25 * 2.0 * M_PI / omega, true);
        const bool blow = !tr.events.empty();
        c.require((margin > 0.0) == (v.kind == VerdictKind::Global) &&
                      (margin > 0.0) == !blow,
                  "oscillatory threshold agreement", cfg);
        if (v.kind == VerdictKind::Breakdown && blow) {
            const double tc = blowup_time_1d(model, data, 0.0);
            c.metric(std::abs(tc - tr.events.front().t) / tc, 1e-6,
                     "t_c relative error vs oracle", cfg);
        }
    }

    for (int i = 0; i < n; ++i) {  // exponential branch k < 0
        const double k = -c.rng.log_uniform(0.05, 10.0);
        const double cc = c.rng.log_uniform(0.05, 10.0);
        const double r0 = c.rng.log_uniform(0.02, 20.0);
        const double lambda = std::sqrt(-cc * k);
        const Model1D model = ConstantBackground(k, cc);
        double d0, margin;
        InitialData data;
        do {
            d0 = c.rng.uniform(-2.5, 2.5) * lambda * (1.0 + r0 / cc);
            data = const_data(r0, d0);
            margin = margin_1d(model, data, 0.0);
        } while (std::abs(margin) <= 1e-9);
        const std::string cfg =
            flags_1d("const-bg", k, data, ("--c " + num(cc)).c_str());

        const Verdict v = verdict_1d(model, data, AlphaGrid{0.0, 1.0, 9});
        const double A = 0.5 * (1.0 - r0 / cc - d0 / lambda);
        const double B = 0.5 * (1.0 - r0 / cc + d0 / lambda);
        if (margin > 0.0) {
            const double horizon =
                std::log(std::max(std::abs(A) / std::max(B, 1e-300), 1.0)) / (2.0 * lambda) +
                6.0 / lambda;
            const Trajectory tr = oracle_indicator({k, cc, 0.0, r0}, d0, horizon, true);
            c.require(v.kind == VerdictKind::Global && tr.events.empty(),
                      "attractive global agreement", cfg);
        } else {
            c.require(v.kind == VerdictKind::Breakdown, "attractive breakdown verdict", cfg);
            if (v.kind != VerdictKind::Breakdown) continue;
            const double tc = blowup_time_1d(model, data, 0.0);
            const Trajectory tr =
                oracle_indicator({k, cc, 0.0, r0}, d0, 1.05 * tc + 1.0 / lambda, true);
            c.require(!tr.events.empty(), "attractive breakdown crossing", cfg);
            if (!tr.events.empty())
                c.metric(std::abs(tc - tr.events.front().t) / tc, 1e-6,
                         "t_c relative error vs oracle", cfg);
        }
    }
}

// ---------------------------------------------------------------------------
// 5. Weak relaxation: t* is a genuine interior minimum under the oracle, and
//    global solutions relax the density toward the background.
// ---------------------------------------------------------------------------

void family_relaxation(Ctx& c) {
    const int n = c.count(100);
    for (int i = 0; i < n; ++i) {
        const double k = c.rng.log_uniform(0.1, 5.0);
        const double cc = c.rng.log_uniform(0.1, 5.0);
        const double eps = (1.0 / (2.0 * std::sqrt(cc * k))) * c.rng.log_uniform(1.05, 20.0);
        double r0;
        do {
            r0 = c.rng.log_uniform(0.1, 10.0);
        } while (std::abs(r0 - cc) < 0.02 * cc);
        double d0;
        do {
            d0 = c.rng.uniform(-1.0, 1.0) * 2.0 * std::sqrt(cc * k) * (1.0 + r0 / cc);
        } while (d0 == 0.0);

        const RelaxationWeak model(k, cc, eps);
        const InitialData data = const_data(r0, d0);
        const std::string cfg = flags_1d(
            "relax-weak", k, data, ("--c " + num(cc) + " --eps " + num(eps)).c_str());

        const CriticalTimeWeak ct = critical_time_weak(model, data, 0.0);
        const Trajectory tr =
            oracle_indicator({k, cc, 1.0 / eps, r0}, d0, ct.t_star, false);
        const double g = tr.final_state()[0];
        const double gt = tr.final_state()[1];
        const double gtt = k * r0 - cc * k * g - gt / eps;
        c.require(gtt > 0.0, "indicator curvature positive at t*", cfg);
        if (gtt > 0.0)
            c.metric(std::abs(gt), 1e-6 * std::abs(gtt) * ct.t_star,
                     "stationarity of the indicator at t*", cfg);

        const Verdict v = verdict_1d(Model1D(model), data, AlphaGrid{0.0, 1.0, 9});
        if (v.kind == VerdictKind::Global) {
            const CharacteristicState st =
                solution_along_characteristic(Model1D(model), data, 0.0, 40.0 * eps);
            c.metric(std::abs(st.rho - cc), 1e-3 * std::abs(r0 - cc),
                     "density relaxation toward the background", cfg);
        }
    }
}

// ---------------------------------------------------------------------------
// 6. Vanishing-background limit of the oscillatory threshold.
// ---------------------------------------------------------------------------

void family_background_limit(Ctx& c) {
    const double cc = 1e-6, k = 1.0, r0 = 1.0;
    const double osc = std::sqrt(k * (2.0 * r0 - cc));
    const double vac = std::sqrt(2.0 * k * r0);
    c.metric(std::abs(osc - vac), 1e-3, "threshold gap at c = 1e-6", "");

    // Verdicts agree across the limit wherever both models are decided the
    // same way (|d0| under the oscillatory threshold, or d0 below -vac).
    const Model1D with_bg = ConstantBackground(k, cc);
    const Model1D no_bg = ZeroBackground(k);
    for (double d0 : {-1.35, -1.0, 0.0, 1.0, 1.35, -1.5, -2.0}) {
        const InitialData data = const_data(r0, d0);
        const Verdict va = verdict_1d(with_bg, data, AlphaGrid{0.0, 1.0, 5});
        const Verdict vb = verdict_1d(no_bg, data, AlphaGrid{0.0, 1.0, 5});
        const bool comparable = std::abs(d0) < osc || d0 < -vac;
        if (comparable)
            c.require(va.kind == vb.kind, "verdicts agree in the small-c limit",
                      flags_1d("const-bg", k, data, "--c 1e-6"));
    }
}

// ---------------------------------------------------------------------------
// 7. Radial flow maps vs the oracle, energy integrals, bounds and floors.
// ---------------------------------------------------------------------------

void family_flow_maps(Ctx& c) {
    for (int nu = 0; nu <= 3; ++nu) {
        const int n = c.count(50);
        for (int i = 0; i < n; ++i) {
            std::string n0_expr;
            if (i == 0) {
                n0_expr = "0";  // vacuum: free streaming
            } else {
                switch (c.rng.pick(3)) {
                    case 0: n0_expr = num(c.rng.log_uniform(0.05, 3.0)); break;
                    case 1:
                        n0_expr = num(c.rng.log_uniform(0.05, 2.0)) + "+" +
                                  num(c.rng.uniform(0.0, 2.0)) + "*x^2";
                        break;
                    default:
                        n0_expr = num(c.rng.log_uniform(0.05, 3.0)) + "*exp(-x^2/" +
                                  num(c.rng.log_uniform(0.5, 4.0)) + ")";
                        break;
                }
            }
            const std::string u0_expr = num(c.rng.log_uniform(0.3, 3.0)) + "*(1+" +
                                        num(c.rng.uniform(0.0, 1.0)) + "*x)";
            const double k = c.rng.log_uniform(0.1, 5.0);
            const InitialData data = make_data(n0_expr, u0_expr, Domain::HalfLine);
            const IsotropicConfig cfg(nu, k, data);
            const double alpha = c.rng.log_uniform(0.1, 3.0);
            const double e0 = cfg.e0(alpha);
            const double u0 = cfg.u0(alpha);
            const std::string id = flags_radial(nu, k, data, AlphaGrid{alpha, alpha, 1});

            IvpSpec spec;
            spec.rhs = [k, e0, nu](double, const std::vector<double>& y,
                                   std::vector<double>& dy) {
                dy[0] = y[1];
                dy[1] = k * e0 * std::pow(y[0], -nu);
            };
            spec.y0 = {alpha, u0};
            spec.t1 = 100.0;
            spec.rel_tol = 1e-12;
            spec.abs_tol = 1e-14;
            const Trajectory tr = integrate(spec);
            c.require(tr.status == IvpStatus::Done, "flow oracle reaches t = 100", id);
            if (tr.status != IvpStatus::Done) continue;

            auto energy = [&](double r, double u) {
                if (nu == 0) return u * u - 2.0 * k * e0 * r;
                if (nu == 1) return u * u - 2.0 * k * e0 * std::log(r);
                return u * u + 2.0 * k * e0 * std::pow(r, 1 - nu) / (nu - 1);
            };
            const double E_ref = energy(alpha, u0);
            const double e_tol = 1e-9 * std::max(1.0, std::abs(E_ref));

            double worst_rel = 0.0, worst_energy = 0.0;
            bool bounds_ok = true;
            for (int j = 0; j < 100; ++j) {
                const double t = 100.0 * (j + 1) / 100.0;
                const FlowPoint fp = flow_point(cfg, alpha, t);
                const double r_o = tr.eval_component(t, 0);
                worst_rel = std::max(worst_rel, std::abs(fp.r - r_o) / r_o);
                worst_energy = std::max(worst_energy, std::abs(energy(fp.r, fp.u) - E_ref));
                if (nu >= 1) {
                    const auto [lo, hi] = flow_bounds(nu, alpha, u0, e0, k, t);
                    const double slack = 1e-10 * (1.0 + fp.r);
                    if (fp.r < lo - slack || fp.r > hi + slack) bounds_ok = false;
                }
            }
            c.metric(worst_rel, 1e-8, "flow map vs oracle (rel)", id);
            c.metric(worst_energy, e_tol, "energy integral drift", id);
            if (nu >= 1) c.require(bounds_ok, "two-sided bounds contain r", id);
        }
    }
}

// ---------------------------------------------------------------------------
// 8. The exactly solvable nu = 3 threshold, bidirectionally against the
//    indicator oracle, plus the asymptotic velocity.
// ---------------------------------------------------------------------------

void family_nu3(Ctx& c) {
    const int n = c.count(200);
    const AlphaGrid grid{0.2, 2.5, 17};
    int globals = 0, breakdowns = 0;
    for (int i = 0; i < n; ++i) {
        const double k = c.rng.log_uniform(0.2, 3.0);
        const std::string n0_expr = num(c.rng.log_uniform(0.05, 2.0)) + "+" +
                                    num(c.rng.uniform(0.0, 1.0)) + "*x^2";
        const std::string u0_expr = num(c.rng.log_uniform(0.3, 3.0)) + "*(1+" +
                                    num(c.rng.uniform(-0.25, 1.2)) + "*x)";
        const InitialData data = make_data(n0_expr, u0_expr, Domain::HalfLine);
        const IsotropicConfig cfg(3, k, data);
        const std::string id = flags_radial(3, k, data, grid);

        const Verdict v = verdict_nu3(cfg, grid);

        // Velocity limit at a couple of labels (holds for every configuration:
        // the flow map itself never collapses).
        for (double a : {grid.node(2), grid.node(12)}) {
            const double q = cfg.u0(a) * cfg.u0(a) + k * a * cfg.E0(a);
            const FlowPoint fp = flow_nu3(cfg, a, 1e3);
            c.metric(std::abs(fp.u - std::sqrt(q)) / std::sqrt(q), 1e-2,
                     "asymptotic velocity at t = 1e3", id);
        }

        if (v.kind == VerdictKind::Global) {
            ++globals;
            for (int jj : {0, 8, 16}) {
                const double a = grid.node(jj);
                const Trajectory tr = indicator_trajectory(cfg, a, 1e3, true);
                c.require(tr.events.empty() && tr.final_state()[2] > 0.0,
                          "oracle indicator stays positive (global verdict)", id);
            }
        } else {
            ++breakdowns;
            c.require(v.kind == VerdictKind::Breakdown, "verdict is decisive", id);
            // Earliest-crossing node of the closed form, compared to the oracle.
            double t_best = kInf, a_best = grid.node(0);
            for (int jj = 0; jj < grid.count; ++jj) {
                const double a = grid.node(jj);
                const double u0 = cfg.u0(a), du0 = cfg.du0(a);
                const double B = u0 + a * du0;
                const double C = u0 * du0 - k * cfg.E0(a) + 0.5 * k * cfg.n0(a) * a;
                const double tz = detail::earliest_quadratic_root(a, B, C);
                if (tz < t_best) {
                    t_best = tz;
                    a_best = a;
                }
            }
            if (std::isfinite(t_best)) {
                const Trajectory tr =
                    indicator_trajectory(cfg, a_best, 1.05 * t_best + 1.0, true);
                c.require(!tr.events.empty(), "oracle confirms the crossing", id);
                if (!tr.events.empty())
                    c.metric(std::abs(tr.events.front().t - t_best) / t_best, 1e-6,
                             "blow-up time relative error", id);
            }
        }
    }
    if (c.scale >= 0.5)  // distributional check; meaningless for desk-check loads
        c.require(globals > 0 && breakdowns > 0,
                  "sampler produced both verdict kinds (" + std::to_string(globals) +
                      " global, " + std::to_string(breakdowns) + " breakdown)",
                  "");
}

// ---------------------------------------------------------------------------
// 9. Band coherence for nu = 1 and nu = 2: edges ordered, no double firing,
//    sufficient verdicts backed by the oracle, h roots under the cap.
// ---------------------------------------------------------------------------

void family_bands(Ctx& c) {
    for (int nu : {1, 2}) {
        const int n = c.count(200);
        const AlphaGrid grid{0.2, 2.0, 17};
        int gs = 0, bs = 0;
        for (int i = 0; i < n; ++i) {
            const double k = c.rng.log_uniform(0.2, 3.0);
            const std::string n0_expr = num(c.rng.log_uniform(0.05, 3.0)) + "+" +
                                        num(c.rng.uniform(0.0, 2.0)) + "*x^2";
            const std::string u0_expr = num(c.rng.log_uniform(0.3, 3.0)) + "*(1+" +
                                        num(c.rng.uniform(-0.25, 1.5)) + "*x)";
            const InitialData data = make_data(n0_expr, u0_expr, Domain::HalfLine);
            const IsotropicConfig cfg(nu, k, data);
            const std::string id = flags_radial(nu, k, data, grid);

            bool ordered = true, no_double = true, caps_ok = true;
            for (int jj = 0; jj < grid.count; ++jj) {
                const double a = grid.node(jj);
                const ThresholdBand b = band(cfg, a);
                const double du0 = cfg.du0(a);
                if (std::isfinite(b.upper) && b.lower > b.upper + 1e-12) ordered = false;
                const bool fire_low = du0 <= b.lower;
                const bool fire_high = du0 > b.upper;
                if (fire_low && fire_high) no_double = false;
                if (nu >= 2) {
                    const double h = h_general(cfg, a);
                    if (std::isfinite(h) && !(h < std::pow(a, 1 - nu))) caps_ok = false;
                }
            }
            c.require(ordered, "band edges ordered", id);
            c.require(no_double, "no double firing", id);
            if (nu >= 2) c.require(caps_ok, "h root under the cap", id);

            const Verdict v = (nu == 1) ? verdict_cylindrical(cfg, grid)
                                        : verdict_general_nu(cfg, grid);
            if (v.kind == VerdictKind::BreakdownSufficient) {
                ++bs;
                const double a = v.witness_alpha.value_or(grid.node(0));
                double horizon = v.t_c ? 1.2 * *v.t_c
                                       : ((nu == 1) ? 20.0 * a / cfg.u0(a)
                                                    : 20.0 / spherical_params(a, cfg.u0(a),
                                                                              cfg.e0(a), k)
                                                               .Q);
                bool crossed = false;
                for (int attempt = 0; attempt < 7 && !crossed; ++attempt, horizon *= 2.0) {
                    const Trajectory tr = indicator_trajectory(cfg, a, horizon, true);
                    crossed = !tr.events.empty();
                }
                c.require(crossed, "breakdown certificate confirmed by oracle", id);
            } else if (v.kind == VerdictKind::GlobalSufficient) {
                ++gs;
                for (int jj : {0, 8, 16}) {
                    const double a = grid.node(jj);
                    const double horizon =
                        (nu == 1)
                            ? 200.0 * a / cfg.u0(a)
                            : 200.0 / spherical_params(a, cfg.u0(a), cfg.e0(a), k).Q;
                    const Trajectory tr = indicator_trajectory(cfg, a, horizon, true);
                    c.require(tr.events.empty() && tr.final_state()[2] > 0.0,
                              "global certificate confirmed by oracle", id);
                }
            }
        }
        if (c.scale >= 0.5)
            c.require(gs > 0 && bs > 0,
                      "nu=" + std::to_string(nu) + " sampler produced both certificates (" +
                          std::to_string(gs) + " global, " + std::to_string(bs) +
                          " breakdown)",
                      "");
    }
}

// ---------------------------------------------------------------------------
// 10. Half-line planar blow-up time equals the line formula for constant
//     profiles.
// ---------------------------------------------------------------------------

void family_halfline_identity(Ctx& c) {
    const int n = c.count(50);
    for (int i = 0; i < n; ++i) {
        const double k = c.rng.log_uniform(0.1, 10.0);
        const double r0 = c.rng.log_uniform(0.1, 10.0);
        const double w = std::sqrt(2.0 * k * r0);
        const double d0 = -w * (1.0 + c.rng.log_uniform(0.01, 2.0));
        const double u_base = 1.0 + 1.1 * std::abs(d0);
        const InitialData data =
            make_data(num(r0), num(u_base) + "+" + num(d0) + "*x", Domain::HalfLine);
        const IsotropicConfig cfg(0, k, data);
        const std::string id = flags_radial(0, k, data, AlphaGrid{0.0, 1.0, 9});

        const Verdict v = verdict_planar_halfline(cfg, AlphaGrid{0.0, 1.0, 9});
        c.require(v.kind == VerdictKind::Breakdown && v.t_c.has_value(),
                  "half-line breakdown with a time", id);
        if (!v.t_c) continue;
        const double tc_line = (-d0 - std::sqrt(d0 * d0 - 2.0 * k * r0)) / (k * r0);
        c.metric(std::abs(*v.t_c - tc_line) / tc_line, 1e-12,
                 "half-line vs line blow-up time", id);
    }
}

// ---------------------------------------------------------------------------
// 11. Finite-difference check of the viscous beta envelope.
// ---------------------------------------------------------------------------

void family_viscous_fd(Ctx& c) {
    struct Case {
        const char* rho0;
        const char* u0;
    };
    const Case cases[] = {
        {"1/(1+x^2)", "-2*atan(x)"},   // contracting: envelope active until 0.5
        {"1/(1+x^2)", "0.5*atan(x)"},  // expanding: globally smooth
    };
    for (const Case& cs : cases) {
        const InitialData data = make_data(cs.rho0, cs.u0);
        const std::string id = flags_1d("viscous", 1.0, data);
        const FdBetaReport rep = fd_beta_check(data, 1.0, AlphaGrid{-8.0, 8.0, 400}, 0.5);
        c.metric(rep.max_beta_drift, 1e-6, "beta spatial constancy drift", id);
        c.metric(rep.max_rho_envelope_gap, 1e-6, "rho vs envelope formula", id);
    }
}

}  // namespace

std::vector<FamilyResult> run_validation(const ValidationOptions& opts) {
    std::vector<FamilyResult> out;
    double total = 0.0;

    auto run = [&](const char* name, void (*body)(Ctx&), std::uint64_t salt) {
        Ctx ctx{Sampler(opts.seed * 0x9e3779b97f4a7c15ull + salt),
                std::max(opts.scale, 0.0), opts.inject_gamma_sign_bug,
                0, 0, -1.0, std::string(), std::string()};
        const auto t0 = std::chrono::steady_clock::now();
        std::string error;
        try {
            body(ctx);
        } catch (const std::exception& e) {
            ++ctx.failed;
            error = e.what();
        }
        FamilyResult r;
        r.name = name;
        r.seconds = seconds_since(t0);
        total += r.seconds;
        r.pass = (ctx.failed == 0) && error.empty();
        r.detail = std::to_string(ctx.checked) + " checks, " + std::to_string(ctx.failed) +
                   " failures";
        if (!ctx.worst_what.empty()) r.detail += "; worst: " + ctx.worst_what;
        if (!error.empty()) r.detail += "; exception: " + error;
        r.worst_config = ctx.worst_config;
        out.push_back(std::move(r));
    };

    run("viscous-worked-example", family_viscous_example, 1);
    run("zero-background-threshold", family_zero_background, 2);
    run("zero-background-decay", family_decay, 3);
    run("constant-background-threshold", family_const_background, 4);
    run("weak-relaxation-critical-time", family_relaxation, 5);
    run("vanishing-background-limit", family_background_limit, 6);
    run("radial-flow-maps", family_flow_maps, 7);
    run("nu3-exact-threshold", family_nu3, 8);
    run("radial-band-coherence", family_bands, 9);
    run("half-line-identity", family_halfline_identity, 10);
    run("viscous-fd-envelope", family_viscous_fd, 11);

    FamilyResult budget;
    budget.name = "runtime-budget";
    budget.pass = total < 180.0;
    budget.detail = num(total) + " s for all families (budget 180 s)";
    budget.seconds = 0.0;
    out.push_back(std::move(budget));
    return out;
}

}  // namespace epcrit
