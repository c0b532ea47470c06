#include "epcrit/thresholds_multid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace epcrit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nu(const IsotropicConfig& cfg, int expected) {
    if (cfg.nu != expected)
        throw std::invalid_argument("verdict: config has nu = " + std::to_string(cfg.nu) +
                                    ", expected " + std::to_string(expected));
}

void require_positive_labels(const AlphaGrid& grid) {
    if (!(grid.alpha_min > 0.0))
        throw std::invalid_argument("radial verdicts need labels alpha > 0");
    if (grid.alpha_max < grid.alpha_min || grid.count < 1)
        throw std::invalid_argument("malformed label grid");
}

}  // namespace

namespace detail {

double earliest_quadratic_root(double alpha, double B, double C) {
    // q(t) = alpha + B t + C t^2 with q(0) = alpha > 0.
    if (C == 0.0) {
        if (B >= 0.0) return kInf;
        return -alpha / B;
    }
    const double disc = B * B - 4.0 * alpha * C;
    if (disc < 0.0) return kInf;
    const double sq = std::sqrt(disc);
    // Stable pair: q = -(B + sgn(B) sq)/2, roots q/C and alpha/q.
    const double q = -0.5 * (B + std::copysign(sq, B));
    double best = kInf;
    if (q != 0.0) {
        const double r1 = q / C;
        const double r2 = alpha / q;
        if (r1 > 0.0) best = r1;
        if (r2 > 0.0) best = std::min(best, r2);
    } else {
        // B == 0 and disc == 0 requires alpha*C == 0, excluded by alpha > 0.
        const double r = -B / (2.0 * C);
        if (r > 0.0) best = r;
    }
    return best;
}

double cylindrical_root(double pref, double u0sq, double slope) {
    if (pref == 0.0) return kInf;
    if (!(pref > 0.0) || !(u0sq > 0.0) || slope < 0.0)
        throw std::invalid_argument("cylindrical_root: need pref > 0, u0^2 > 0, slope >= 0");

    auto lhs = [&](double h) {
        if (h <= 0.0) return 0.0;
        auto f = [&](double eta) {
            const double w = u0sq + slope * eta;
            return (h - eta) * std::exp(eta) / (w * std::sqrt(w));
        };
        return pref * quad(f, 0.0, h);
    };

    double lo = 0.0, hi = 1.0;
    double g_hi = lhs(hi);
    int doublings = 0;
    while (g_hi < 1.0) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 60 || hi > 600.0)
            throw NumericsError("cylindrical_root: left side never reached 1");
        g_hi = lhs(hi);
    }
    if (g_hi == 1.0) return hi;
    if (lhs(lo) == 1.0) return lo;
    return find_root([&](double h) { return lhs(h) - 1.0; }, lo, hi);
}

double general_root(double pref, double u0sq, double slope, double cap, double expo) {
    if (pref == 0.0) return kInf;
    if (!(pref > 0.0) || !(u0sq > 0.0) || slope < 0.0 || !(cap > 0.0))
        throw std::invalid_argument("general_root: need pref > 0, u0^2 > 0, slope >= 0, cap > 0");

    // The weight (cap - eta)^expo with expo <= -1 is singular at eta = cap;
    // the search stays a relative 1e-8 short of it and the quadrature panels
    // are graded toward the steep end.
    QuadOptions qopts;
    qopts.graded = GradedEnd::Upper;
    auto lhs = [&](double h) {
        if (h <= 0.0) return 0.0;
        auto f = [&](double eta) {
            const double w = u0sq + slope * eta;
            return (h - eta) * std::pow(cap - eta, expo) / (w * std::sqrt(w));
        };
        return pref * quad(f, 0.0, h, qopts);
    };

    const double hi = cap * (1.0 - 1e-8);
    const double g_hi = lhs(hi);
    if (g_hi < 1.0) return kInf;  // no root short of the cap
    if (g_hi == 1.0) return hi;
    return find_root([&](double h) { return lhs(h) - 1.0; }, 0.0, hi);
}

double nu3_threshold(double alpha, double u0, double E0, double n0, double k) {
    // Boundary of { u0' : q stays positive } at one label; the global set is
    // an interval unbounded above in u0'.
    const double sC = (k * E0 - 0.5 * k * n0 * alpha) / u0;  // C > 0 above this
    const double sB = -u0 / alpha;                           // B >= 0 above this
    const double D = 4.0 * k * alpha * (0.5 * n0 * alpha - E0);
    if (D > 0.0) {
        const double s_q = (u0 - std::sqrt(D)) / alpha;  // lower edge of B^2 < 4 alpha C
        return std::max(sC, std::min(sB, s_q));
    }
    return std::max(sC, sB);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// nu = 0 (half line, exact)
// ---------------------------------------------------------------------------

Verdict verdict_planar_halfline(const IsotropicConfig& cfg, const AlphaGrid& alphas) {
    require_nu(cfg, 0);
    if (alphas.alpha_min < 0.0 || alphas.alpha_max < alphas.alpha_min || alphas.count < 1)
        throw std::invalid_argument("malformed label grid");

    auto margin = [&](double a) { return cfg.du0(a) + std::sqrt(2.0 * cfg.k * cfg.n0(a)); };
    auto [a_worst, m_min] = grid_minimize(margin, alphas);

    Verdict v;
    v.witness_alpha = a_worst;
    v.margin = m_min;
    const bool linear_boundary = (m_min == 0.0 && cfg.k * cfg.n0(a_worst) == 0.0);
    if (m_min > 0.0 || linear_boundary) {
        v.kind = VerdictKind::Global;
        return v;
    }

    v.kind = VerdictKind::Breakdown;
    // t_c = 2 / sup s over the violating labels, s = -u0' + sqrt(u0'^2 - 2 k n0).
    auto neg_s = [&](double a) {
        if (margin(a) > 0.0) return kInf;
        const double d = cfg.du0(a);
        const double disc = std::max(0.0, d * d - 2.0 * cfg.k * cfg.n0(a));
        return -(-d + std::sqrt(disc));
    };
    auto [a_sup, neg_min] = grid_minimize(neg_s, alphas);
    const double s_sup = -neg_min;
    if (s_sup > 0.0 && std::isfinite(s_sup)) {
        v.t_c = 2.0 / s_sup;
        v.witness_alpha = a_sup;
    }
    return v;
}

// ---------------------------------------------------------------------------
// nu = 1 (band)
// ---------------------------------------------------------------------------

double h_cylindrical(const IsotropicConfig& cfg, double alpha) {
    require_nu(cfg, 1);
    if (!(alpha > 0.0)) throw std::invalid_argument("h_cylindrical: need alpha > 0");
    const double n0 = cfg.n0(alpha);
    const double u0 = cfg.u0(alpha);
    if (n0 == 0.0) return kInf;
    const double pref = cfg.k * alpha * alpha * n0 * u0;
    const double slope = 2.0 * cfg.k * cfg.e0(alpha);
    return detail::cylindrical_root(pref, u0 * u0, slope);
}

namespace {

// Upper band edge in u0' for nu >= 1; degenerates to the trivial-global edge
// k E0 / u0 when the h-root is not finite (then the global test is the
// non-strict comparison k E0 <= u0 u0').
struct UpperEdge {
    double value;
    bool strict;  // fire on >, else on >=
};

UpperEdge upper_edge(const IsotropicConfig& cfg, double alpha, double h) {
    const double u0 = cfg.u0(alpha);
    const double E0 = cfg.E0(alpha);
    if (std::isfinite(h)) {
        const double n0 = cfg.n0(alpha);
        const double scale = (cfg.nu == 1) ? alpha * n0 * h
                                           : n0 * std::pow(alpha, cfg.nu) * h / (cfg.nu - 1);
        return {-(cfg.k / u0) * (scale - E0), true};
    }
    return {cfg.k * E0 / u0, false};
}

// Parametric horizon through the first zero of
// b(tau) = 1 + alpha u0' tau + (k/2) alpha rho0 tau^2 (nu = 1): an upper
// bound for the breakdown time at one violating label.
double cylindrical_horizon(const IsotropicConfig& cfg, double alpha) {
    const double du0 = cfg.du0(alpha);
    const double rho0 = cfg.rho0(alpha);
    const double tau_star =
        detail::earliest_quadratic_root(1.0, alpha * du0, 0.5 * cfg.k * alpha * rho0);
    if (!std::isfinite(tau_star)) return kInf;
    const double u0 = cfg.u0(alpha);
    const double ke0 = cfg.k * cfg.e0(alpha);
    const double peak = 0.5 * ke0 * tau_star * tau_star + u0 * tau_star;
    if (peak > 700.0) return kInf;  // bound too large to be a useful certificate
    auto f = [&](double xi) { return std::exp(0.5 * ke0 * xi * xi + u0 * xi); };
    return alpha * quad(f, 0.0, tau_star);
}

}  // namespace

Verdict verdict_cylindrical(const IsotropicConfig& cfg, const AlphaGrid& alphas) {
    require_nu(cfg, 1);
    require_positive_labels(alphas);

    auto lower_margin = [&](double a) {
        return cfg.du0(a) + std::sqrt(2.0 * cfg.k * cfg.n0(a));
    };
    auto [a_low, ml_min] = grid_minimize(lower_margin, alphas);

    Verdict v;
    if (ml_min <= 0.0) {
        v.kind = VerdictKind::BreakdownSufficient;
        v.margin = ml_min;
        v.witness_alpha = a_low;
        auto horizon = [&](double a) {
            if (lower_margin(a) > 0.0) return kInf;
            return cylindrical_horizon(cfg, a);
        };
        auto [a_t, t_min] = grid_minimize(horizon, alphas);
        if (std::isfinite(t_min)) {
            v.t_c = t_min;
            v.witness_alpha = a_t;
        }
        return v;
    }

    bool degenerate_hits_boundary = false;
    auto upper_margin = [&](double a) {
        const UpperEdge e = upper_edge(cfg, a, h_cylindrical(cfg, a));
        return cfg.du0(a) - e.value;
    };
    auto [a_up, mu_min] = grid_minimize(upper_margin, alphas);
    if (mu_min == 0.0 && cfg.n0(a_up) == 0.0) degenerate_hits_boundary = true;

    v.margin = mu_min;
    v.witness_alpha = a_up;
    v.kind = (mu_min > 0.0 || degenerate_hits_boundary) ? VerdictKind::GlobalSufficient
                                                        : VerdictKind::Indeterminate;
    return v;
}

// ---------------------------------------------------------------------------
// nu >= 2 (lower edge, and band with the h_nu root)
// ---------------------------------------------------------------------------

namespace {

double lower_edge_general(const IsotropicConfig& cfg, double a) {
    const double u0 = cfg.u0(a);
    return -(cfg.k / u0) * (cfg.n0(a) * a / (cfg.nu - 1) - cfg.E0(a));
}

}  // namespace

Verdict verdict_spherical_lower(const IsotropicConfig& cfg, const AlphaGrid& alphas) {
    if (cfg.nu < 2)
        throw std::invalid_argument("verdict_spherical_lower: need nu >= 2");
    require_positive_labels(alphas);

    auto margin = [&](double a) { return cfg.du0(a) - lower_edge_general(cfg, a); };
    auto [a_worst, m_min] = grid_minimize(margin, alphas);

    Verdict v;
    v.margin = m_min;
    v.witness_alpha = a_worst;
    v.kind = (m_min < 0.0) ? VerdictKind::BreakdownSufficient : VerdictKind::Indeterminate;
    return v;
}

double h_general(const IsotropicConfig& cfg, double alpha) {
    if (cfg.nu < 2) throw std::invalid_argument("h_general: need nu >= 2");
    if (!(alpha > 0.0)) throw std::invalid_argument("h_general: need alpha > 0");
    const double n0 = cfg.n0(alpha);
    const double u0 = cfg.u0(alpha);
    if (n0 == 0.0) return kInf;
    const double nm1 = cfg.nu - 1;
    const double pref = cfg.k * u0 * n0 * alpha / (nm1 * nm1);
    const double slope = 2.0 * cfg.k * cfg.e0(alpha) / nm1;
    const double cap = std::pow(alpha, 1.0 - cfg.nu);
    const double expo = static_cast<double>(cfg.nu) / (1.0 - cfg.nu);
    return detail::general_root(pref, u0 * u0, slope, cap, expo);
}

Verdict verdict_general_nu(const IsotropicConfig& cfg, const AlphaGrid& alphas) {
    if (cfg.nu < 2 || cfg.nu == 3)
        throw std::invalid_argument("verdict_general_nu: need nu >= 2, nu != 3");
    require_positive_labels(alphas);

    Verdict low = verdict_spherical_lower(cfg, alphas);
    if (low.kind == VerdictKind::BreakdownSufficient) return low;

    bool degenerate_hits_boundary = false;
    auto upper_margin = [&](double a) {
        const UpperEdge e = upper_edge(cfg, a, h_general(cfg, a));
        return cfg.du0(a) - e.value;
    };
    auto [a_up, mu_min] = grid_minimize(upper_margin, alphas);
    if (mu_min == 0.0 && !std::isfinite(h_general(cfg, a_up))) degenerate_hits_boundary = true;

    Verdict v;
    v.margin = mu_min;
    v.witness_alpha = a_up;
    v.kind = (mu_min > 0.0 || degenerate_hits_boundary) ? VerdictKind::GlobalSufficient
                                                        : VerdictKind::Indeterminate;
    return v;
}

// ---------------------------------------------------------------------------
// nu = 3 (exact)
// ---------------------------------------------------------------------------

namespace {

struct Nu3Coeffs {
    double B, C;
};

Nu3Coeffs nu3_coeffs(const IsotropicConfig& cfg, double a) {
    const double u0 = cfg.u0(a);
    const double du0 = cfg.du0(a);
    const double B = u0 + a * du0;
    const double C = u0 * du0 - cfg.k * cfg.E0(a) + 0.5 * cfg.k * cfg.n0(a) * a;
    return {B, C};
}

bool nu3_global_at(const IsotropicConfig& cfg, double a) {
    const auto [B, C] = nu3_coeffs(cfg, a);
    if (C > 0.0) return B >= 0.0 || B * B < 4.0 * a * C;
    return C == 0.0 && B >= 0.0;
}

}  // namespace

Verdict verdict_nu3(const IsotropicConfig& cfg, const AlphaGrid& alphas) {
    require_nu(cfg, 3);
    require_positive_labels(alphas);

    auto margin = [&](double a) {
        return cfg.du0(a) - detail::nu3_threshold(a, cfg.u0(a), cfg.E0(a), cfg.n0(a), cfg.k);
    };
    auto [a_worst, m_min] = grid_minimize(margin, alphas);

    // At the center the indicator reduces to 1 + u0'(0) t, so global smoothness
    // additionally needs u0'(0) >= 0.
    const double du0_origin = cfg.du0(0.0);

    Verdict v;
    v.margin = m_min;
    v.witness_alpha = a_worst;
    if (du0_origin < v.margin) {
        v.margin = du0_origin;
        v.witness_alpha = 0.0;
    }

    bool all_global = du0_origin >= 0.0;
    for (int i = 0; all_global && i < alphas.count; ++i)
        all_global = nu3_global_at(cfg, alphas.node(i));

    if (all_global) {
        v.kind = VerdictKind::Global;
        return v;
    }

    v.kind = VerdictKind::Breakdown;
    auto first_zero = [&](double a) {
        if (nu3_global_at(cfg, a)) return kInf;
        const auto [B, C] = nu3_coeffs(cfg, a);
        return detail::earliest_quadratic_root(a, B, C);
    };
    auto [a_t, t_min] = grid_minimize(first_zero, alphas);
    double t_c = t_min;
    double a_c = a_t;
    if (du0_origin < 0.0 && -1.0 / du0_origin < t_c) {
        t_c = -1.0 / du0_origin;
        a_c = 0.0;
    }
    if (std::isfinite(t_c)) {
        v.t_c = t_c;
        v.witness_alpha = a_c;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Dispatch and band
// ---------------------------------------------------------------------------

Verdict verdict_multid(const IsotropicConfig& cfg, const AlphaGrid& alphas) {
    switch (cfg.nu) {
        case 0: return verdict_planar_halfline(cfg, alphas);
        case 1: return verdict_cylindrical(cfg, alphas);
        case 3: return verdict_nu3(cfg, alphas);
        default: return verdict_general_nu(cfg, alphas);
    }
}

ThresholdBand band(const IsotropicConfig& cfg, double alpha) {
    ThresholdBand b{};
    switch (cfg.nu) {
        case 0: {
            const double s = -std::sqrt(2.0 * cfg.k * cfg.n0(alpha));
            b.lower = b.upper = s;
            b.exact = s;
            return b;
        }
        case 1: {
            b.lower = -std::sqrt(2.0 * cfg.k * cfg.n0(alpha));
            b.upper = upper_edge(cfg, alpha, h_cylindrical(cfg, alpha)).value;
            return b;
        }
        case 3: {
            const double s =
                detail::nu3_threshold(alpha, cfg.u0(alpha), cfg.E0(alpha), cfg.n0(alpha), cfg.k);
            b.lower = b.upper = s;
            b.exact = s;
            return b;
        }
        default: {
            b.lower = lower_edge_general(cfg, alpha);
            b.upper = upper_edge(cfg, alpha, h_general(cfg, alpha)).value;
            return b;
        }
    }
}

}  // namespace epcrit
