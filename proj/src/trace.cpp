#include "epcrit/trace.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

#include "epcrit/oracle.hpp"
#include "epcrit/riccati.hpp"

namespace epcrit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ModelCoeffs {
    double k;
    double c;        // background level (0 for the vacuum-background model)
    double inv_eps;  // velocity damping rate (0 when relaxation is absent)
};

ModelCoeffs model_coeffs(const Model1D& model) {
    return std::visit(
        [](const auto& m) -> ModelCoeffs {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ZeroBackground>) {
                return {m.k, 0.0, 0.0};
            } else if constexpr (std::is_same_v<T, ConstantBackground>) {
                return {m.k, m.c, 0.0};
            } else {
                return {m.k, m.c, 1.0 / m.eps};
            }
        },
        model);
}

// Initial field at the label in the zero-mean gauge. Half-line data
// integrates from the wall; full-line data splits the truncated mass
// symmetrically so that an even rho0 gives E0(0) = 0.
double initial_field(const InitialData& data, double c, double alpha, double domain_cut) {
    auto excess = [&](double x) { return data.rho0.eval(x) - c; };
    if (data.rho0.domain() == Domain::HalfLine) return quad(excess, 0.0, alpha);
    const double L = domain_cut;
    if (!(L > 0.0) || std::abs(alpha) > L)
        throw std::invalid_argument("trace_1d: label outside the domain cut");
    return 0.5 * (quad(excess, -L, alpha) - quad(excess, alpha, L));
}

std::vector<double> sample_times(double t_end, int samples) {
    if (!(t_end > 0.0)) throw std::invalid_argument("trace: need t_end > 0");
    if (samples < 1) throw std::invalid_argument("trace: need samples >= 1");
    std::vector<double> ts;
    ts.reserve(static_cast<size_t>(samples));
    if (samples == 1) {
        ts.push_back(0.0);
        return ts;
    }
    for (int j = 0; j < samples; ++j)
        ts.push_back(t_end * static_cast<double>(j) / static_cast<double>(samples - 1));
    return ts;
}

}  // namespace

TraceResult trace_1d(const Model1D& model, const InitialData& data, double alpha,
                     double t_end, int samples, double domain_cut) {
    const std::vector<double> times = sample_times(t_end, samples);
    const ModelCoeffs mc = model_coeffs(model);
    const double rho0 = data.rho0.eval(alpha);
    const double u0 = data.u0.eval(alpha);
    const double E0 = initial_field(data, mc.c, alpha, domain_cut);

    // First indicator zero on the horizon: closed form when the model
    // certifies one, otherwise (and as a backstop) a sign scan of Gamma over
    // the sample grid.
    double t_star = kInf;
    try {
        t_star = blowup_time_1d(model, data, alpha);
    } catch (const DomainError&) {
    }
    if (!(t_star <= t_end)) {
        double prev_t = 0.0;
        for (double t : times) {
            if (t <= 0.0) continue;
            if (gamma_1d(model, data, alpha, t).gamma <= 0.0) {
                t_star = find_root(
                    [&](double s) { return gamma_1d(model, data, alpha, s).gamma; }, prev_t, t);
                break;
            }
            prev_t = t;
        }
    }

    TraceResult result;
    double t_hi = t_end;
    if (t_star <= t_end) {
        result.blowup_bracket = {t_star * (1.0 - 5e-12), t_star * (1.0 + 5e-12) + 1e-15};
        t_hi = (*result.blowup_bracket)[0] * (1.0 - 1e-9);
    }

    // Characteristic system x' = u, u' = kE - u/eps, E' = -cu.
    IvpSpec spec;
    spec.rhs = [&mc](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = mc.k * y[2] - mc.inv_eps * y[1];
        dy[2] = -mc.c * y[1];
    };
    spec.y0 = {alpha, u0, E0};
    spec.t1 = t_hi;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-14;
    const Trajectory traj = (t_hi > 0.0) ? integrate(spec) : Trajectory{};

    auto emit = [&](double t) {
        const GammaPair g = gamma_1d(model, data, alpha, t);
        if (!(g.gamma > 0.0)) return;
        double x = alpha, u = u0;
        if (t > 0.0) {
            x = traj.eval_component(t, 0);
            u = traj.eval_component(t, 1);
        }
        result.rows.push_back({t, x, u, g.gamma, g.gamma_t, rho0 / g.gamma, g.gamma_t / g.gamma});
    };

    for (double t : times) {
        if (t > t_hi) break;
        emit(t);
    }
    if (result.blowup_bracket && (result.rows.empty() || result.rows.back().t < t_hi))
        emit(t_hi);
    return result;
}

TraceResult trace_multid(const IsotropicConfig& cfg, double alpha, double t_end,
                         int samples) {
    const std::vector<double> times = sample_times(t_end, samples);
    const double n0 = cfg.n0(alpha);
    const double rho0 = cfg.rho0(alpha);

    const Trajectory traj = indicator_trajectory(cfg, alpha, t_end, /*halt_on_zero=*/true);

    TraceResult result;
    double t_hi = traj.t_end();
    if (!traj.events.empty()) {
        const double te = traj.events.front().t;
        result.blowup_bracket = {te * (1.0 - 1e-10), te * (1.0 + 1e-10) + 1e-15};
        t_hi = (*result.blowup_bracket)[0] * (1.0 - 1e-9);
    }

    auto emit = [&](double t) {
        const std::vector<double> y = traj.eval(t);
        const double r = y[0], u = y[1], gamma = y[2], gamma_t = y[3];
        if (!(gamma > 0.0) || !(r > 0.0 || cfg.nu == 0)) return;
        const double n = (cfg.nu == 0) ? n0 / gamma : rho0 / (std::pow(r, cfg.nu) * gamma);
        result.rows.push_back({t, r, u, gamma, gamma_t, n, gamma_t / gamma});
    };

    for (double t : times) {
        if (t > t_hi) break;
        emit(t);
    }
    if (result.blowup_bracket && (result.rows.empty() || result.rows.back().t < t_hi))
        emit(t_hi);
    return result;
}

}  // namespace epcrit
