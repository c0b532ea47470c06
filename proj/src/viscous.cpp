#include "epcrit/viscous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "epcrit/riccati.hpp"

namespace epcrit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Earliest positive root of (k/2) t^2 + b t + c0 = 0 (the envelope
// denominator rescaled by rho0), +inf when none exists.
double earliest_denominator_root(double k, double b, double c0) {
    if (k == 0.0) {
        if (b < 0.0) return -c0 / b;
        return kInf;
    }
    double a = 0.5 * k;
    double disc = b * b - 4.0 * a * c0;
    if (disc < 0.0) return kInf;
    double sq = std::sqrt(disc);
    double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    double best = kInf;
    if (q != 0.0) {
        double r1 = q / a, r2 = c0 / q;
        if (r1 > 0.0) best = std::min(best, r1);
        if (r2 > 0.0) best = std::min(best, r2);
    } else if (c0 / a < 0.0) {
        best = std::sqrt(-c0 / a);
    }
    return best;
}

double envelope_denominator(double k, double edge, double rho0, double t) {
    return rho0 * (0.5 * k * t * t + edge * t) + 1.0;
}

[[noreturn]] void throw_envelope_crossed(double k, double inf_edge, double rho0) {
    double tv = earliest_denominator_root(k, inf_edge, 1.0 / rho0);
    double pad = 1e-12 * tv + 1e-15;
    throw BlowupError("rho_bounds_viscous: envelope denominator vanished", tv - pad,
                      tv + pad);
}

}  // namespace

BetaEnvelope::BetaEnvelope(double beta_inf0_, double beta_sup0_, double k_)
    : beta_inf0(beta_inf0_), beta_sup0(beta_sup0_), k(k_) {
    if (!(beta_inf0 <= beta_sup0))
        throw std::invalid_argument("BetaEnvelope: requires inf <= sup");
    if (!(k >= 0.0)) throw std::invalid_argument("BetaEnvelope: requires k >= 0");
}

std::pair<double, double> beta_bounds(const BetaEnvelope& env, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("beta_bounds: requires t >= 0");
    return {env.beta_inf0 + env.k * t, env.beta_sup0 + env.k * t};
}

std::pair<double, double> rho_bounds_viscous(const BetaEnvelope& env, double rho0_alpha,
                                             double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("rho_bounds_viscous: requires t >= 0");
    if (!(rho0_alpha >= 0.0))
        throw std::invalid_argument("rho_bounds_viscous: requires rho0 >= 0");
    if (rho0_alpha == 0.0) return {0.0, 0.0};

    double den_lo = envelope_denominator(env.k, env.beta_sup0, rho0_alpha, t);
    double den_hi = envelope_denominator(env.k, env.beta_inf0, rho0_alpha, t);
    if (!(den_lo > 0.0) || !(den_hi > 0.0))
        throw_envelope_crossed(env.k, env.beta_inf0, rho0_alpha);
    return {rho0_alpha / den_lo, rho0_alpha / den_hi};
}

std::pair<double, double> d_bounds_viscous(const BetaEnvelope& env, double rho0_alpha,
                                           double t) {
    auto [blo, bhi] = beta_bounds(env, t);
    auto [rlo, rhi] = rho_bounds_viscous(env, rho0_alpha, t);
    // d = beta * rho ranges over the product of the two intervals.
    double lo = blo >= 0.0 ? blo * rlo : blo * rhi;
    double hi = bhi >= 0.0 ? bhi * rhi : bhi * rlo;
    return {lo, hi};
}

Verdict verdict_viscous(const InitialData& data, double k, const AlphaGrid& alphas) {
    if (!(k > 0.0)) throw std::invalid_argument("verdict_viscous: requires k > 0");
    if (alphas.count < 1) throw std::invalid_argument("verdict_viscous: empty grid");

    auto beta0 = [&](double a) {
        double r = data.rho0.eval(a);
        if (!(r > 0.0))
            throw DomainError("verdict_viscous: rho0 must be positive on the grid");
        return data.u0.deriv(a) / r;
    };
    auto neg_beta0 = [&](double a) { return -beta0(a); };
    auto neg_rho = [&](double a) { return -data.rho0.eval(a); };

    auto [alpha_min_beta, inf_beta] = grid_minimize(beta0, alphas);
    auto [alpha_max_beta, neg_sup] = grid_minimize(neg_beta0, alphas);
    double sup_beta = -neg_sup;
    auto [alpha_rho, neg_rho_max] = grid_minimize(neg_rho, alphas);
    double rho_max = -neg_rho_max;

    double threshold = -std::sqrt(2.0 * k / rho_max);
    Verdict v;
    v.witness_alpha = alpha_rho;
    if (inf_beta > threshold) {
        v.kind = VerdictKind::GlobalSufficient;
        v.margin = inf_beta - threshold;
        v.witness_alpha = alpha_min_beta;
        return v;
    }
    if (sup_beta < threshold) {
        v.kind = VerdictKind::BreakdownSufficient;
        v.margin = sup_beta - threshold;
        double tb = earliest_denominator_root(k, sup_beta, 1.0 / rho_max);
        if (std::isfinite(tb)) v.t_c = tb;  // upper bound on the blow-up time
        return v;
    }
    v.kind = VerdictKind::Indeterminate;
    v.margin = inf_beta - threshold;
    v.witness_alpha = alpha_max_beta;
    return v;
}

namespace {

// Piecewise-linear lookup tables for the characteristic transport of u and
// rho. The cumulative mass E0 is filled with Newton-Cotes increments.
struct LabelTable {
    double lo, h;
    std::vector<double> u0, du0, rho0, e0;

    double lerp(const std::vector<double>& f, double a) const {
        double s = (a - lo) / h;
        auto n = static_cast<std::ptrdiff_t>(f.size());
        if (s <= 0.0 || s >= static_cast<double>(n - 1))
            throw NumericsError(
                "fd_beta_check: characteristic label left the tabulated range; "
                "enlarge the spatial grid");
        auto i = static_cast<std::ptrdiff_t>(s);
        double w = s - static_cast<double>(i);
        return f[i] + w * (f[i + 1] - f[i]);
    }
};

LabelTable build_table(const InitialData& data, double lo, double hi) {
    const int n = 8192;
    LabelTable tab;
    tab.lo = lo;
    tab.h = (hi - lo) / n;
    tab.u0.resize(n + 1);
    tab.du0.resize(n + 1);
    tab.rho0.resize(n + 1);
    tab.e0.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        double a = lo + tab.h * j;
        tab.u0[j] = data.u0.eval(a);
        tab.du0[j] = data.u0.deriv(a);
        tab.rho0[j] = data.rho0.eval(a);
    }
    // Cumulative integral of rho0 anchored at E0(0) = 0, using the
    // three-point closed rule for each step.
    std::vector<double> inc(n);
    for (int j = 0; j < n; ++j) {
        if (j + 2 <= n) {
            inc[j] = tab.h *
                     (5.0 * tab.rho0[j] + 8.0 * tab.rho0[j + 1] - tab.rho0[j + 2]) / 12.0;
        } else {  // mirrored rule for the final step
            inc[j] = tab.h *
                     (-tab.rho0[j - 1] + 8.0 * tab.rho0[j] + 5.0 * tab.rho0[j + 1]) / 12.0;
        }
    }
    tab.e0.assign(n + 1, 0.0);
    for (int j = 0; j < n; ++j) tab.e0[j + 1] = tab.e0[j] + inc[j];
    // Shift so that E0 vanishes at label zero (odd-field convention).
    double shift = 0.0;
    if (lo < 0.0 && hi > 0.0) {
        double s = -lo / tab.h;
        auto i = static_cast<std::ptrdiff_t>(s);
        double w = s - static_cast<double>(i);
        shift = tab.e0[i] + w * (tab.e0[i + 1] - tab.e0[i]);
    } else {
        shift = tab.e0[0];
    }
    for (double& v : tab.e0) v -= shift;
    return tab;
}

}  // namespace

FdBetaReport fd_beta_check(const InitialData& data, double k, const AlphaGrid& grid,
                           double t_end) {
    if (!(k >= 0.0)) throw std::invalid_argument("fd_beta_check: requires k >= 0");
    if (grid.count < 8)
        throw std::invalid_argument("fd_beta_check: grid too coarse (need >= 8 cells)");
    if (!(t_end > 0.0)) throw std::invalid_argument("fd_beta_check: requires t_end > 0");

    const int n = grid.count;
    const double x_lo = grid.alpha_min, x_hi = grid.alpha_max;
    const double dx = (x_hi - x_lo) / (n - 1);

    // Validate the precondition: beta0 = u0'/rho0 spatially constant.
    double beta0 = 0.0;
    {
        double bmin = kInf, bmax = -kInf;
        for (int i = 0; i < n; ++i) {
            double a = grid.node(i);
            double r = data.rho0.eval(a);
            if (!(r > 0.0))
                throw std::invalid_argument("fd_beta_check: rho0 must be positive");
            double b = data.u0.deriv(a) / r;
            bmin = std::min(bmin, b);
            bmax = std::max(bmax, b);
        }
        beta0 = 0.5 * (bmin + bmax);
        if (bmax - bmin > 1e-10 * (1.0 + std::abs(beta0)))
            throw std::invalid_argument(
                "fd_beta_check: beta(.,0) = u0'/rho0 must be spatially constant");
    }

    // Tabulate the labels over a padded range so the inverse characteristic
    // map stays inside the table.
    double u_scale = 0.0;
    for (int i = 0; i < n; ++i) u_scale = std::max(u_scale, std::abs(data.u0.eval(grid.node(i))));
    double pad = 1.0 + 2.0 * t_end * (1.0 + u_scale);
    LabelTable tab = build_table(data, x_lo - pad, x_hi + pad);

    // Stability limits from envelope extremes of rho and |u| over the run.
    double rho_min = kInf, rho_max = 0.0, u_max = 0.0;
    for (std::size_t j = 0; j < tab.rho0.size(); j += 16) {
        for (int s = 0; s <= 16; ++s) {
            double t = t_end * s / 16.0;
            double den = envelope_denominator(k, beta0, tab.rho0[j], t);
            if (!(den > 0.0))
                throw NumericsError(
                    "fd_beta_check: density envelope blows up inside the window; "
                    "shorten t_end");
            double r = tab.rho0[j] / den;
            if (tab.rho0[j] > 0.0) rho_min = std::min(rho_min, r);
            rho_max = std::max(rho_max, r);
            u_max = std::max(u_max, std::abs(tab.u0[j] + k * tab.e0[j] * t));
        }
    }
    double dt_adv = u_max > 0.0 ? dx / u_max : kInf;
    double dt_diff = 0.5 * dx * dx * rho_min;
    double dt = 0.4 * std::min(dt_adv, dt_diff);
    double steps_needed = std::ceil(t_end / dt);
    if (!(steps_needed <= 6e6))
        throw NumericsError(
            "fd_beta_check: stable step too small for this grid; use fewer cells or a "
            "shorter t_end");
    int steps = static_cast<int>(steps_needed);
    dt = t_end / steps;

    std::vector<double> beta(n, beta0), beta_next(n);
    std::vector<double> alpha(n), u(n), rho(n);
    for (int i = 0; i < n; ++i) alpha[i] = x_lo + dx * i;

    BetaEnvelope env(beta0, beta0, k);
    FdBetaReport rep{0.0, 0.0, steps, dt};

    for (int s = 0; s < steps; ++s) {
        double t = dt * s;
        // Invert x(alpha, t) = x_i by warm-started Newton; the Jacobian of
        // the map is the indicator 1 + u0' t + k rho0 t^2/2.
        for (int i = 0; i < n; ++i) {
            double x_i = x_lo + dx * i;
            double a = alpha[i];
            for (int it = 0; it < 3; ++it) {
                double x_of_a = a + tab.lerp(tab.u0, a) * t +
                                0.5 * k * tab.lerp(tab.e0, a) * t * t;
                double gam = 1.0 + tab.lerp(tab.du0, a) * t +
                             0.5 * k * tab.lerp(tab.rho0, a) * t * t;
                if (!(gam > 1e-8))
                    throw NumericsError("fd_beta_check: indicator vanished in the window");
                a -= (x_of_a - x_i) / gam;
            }
            alpha[i] = a;
            double r0 = tab.lerp(tab.rho0, a);
            double gam = 1.0 + tab.lerp(tab.du0, a) * t + 0.5 * k * r0 * t * t;
            u[i] = tab.lerp(tab.u0, a) + k * tab.lerp(tab.e0, a) * t;
            rho[i] = r0 / gam;
            if (r0 > 0.0) {
                auto [rl, rh] = rho_bounds_viscous(env, r0, t);
                double gap = std::abs(rho[i] - 0.5 * (rl + rh));
                rep.max_rho_envelope_gap = std::max(rep.max_rho_envelope_gap, gap);
            }
        }

        for (int i = 0; i < n; ++i) {
            double bl = beta[std::max(0, i - 1)];
            double bc = beta[i];
            double br = beta[std::min(n - 1, i + 1)];
            double adv = u[i] > 0.0 ? (bc - bl) / dx : (br - bc) / dx;
            double diff = (br - 2.0 * bc + bl) / (dx * dx);
            beta_next[i] = bc + dt * (k + diff / rho[i] - u[i] * adv);
        }
        beta.swap(beta_next);

        double expected = beta0 + k * (dt * (s + 1));
        for (int i = 0; i < n; ++i)
            rep.max_beta_drift = std::max(rep.max_beta_drift, std::abs(beta[i] - expected));
    }
    return rep;
}

}  // namespace epcrit
