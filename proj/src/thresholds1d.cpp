#include "epcrit/thresholds1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace epcrit {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct PointData {
    double rho0;
    double d0;  // u0'(alpha)
};

PointData point_data(const InitialData& data, double alpha) {
    PointData p{data.rho0.eval(alpha), data.u0.deriv(alpha)};
    if (p.rho0 < 0.0) throw DomainError("initial density must be nonnegative");
    return p;
}

GammaPair gamma_zero(const ZeroBackground& m, const PointData& p, double t) {
    double kr = m.k * p.rho0;
    return {1.0 + p.d0 * t + 0.5 * kr * t * t, p.d0 + kr * t};
}

GammaPair gamma_const(const ConstantBackground& m, const PointData& p, double t) {
    if (m.k > 0.0) {
        double w = std::sqrt(m.c * m.k);
        double s = std::sin(w * t), co = std::cos(w * t);
        return {1.0 + p.d0 / w * s - (p.rho0 - m.c) / m.c * (co - 1.0),
                p.d0 * co + (p.rho0 - m.c) * (m.k / w) * s};
    }
    double lam = std::sqrt(-m.c * m.k);
    double A = 0.5 * (1.0 - p.rho0 / m.c - p.d0 / lam);
    double B = 0.5 * (1.0 - p.rho0 / m.c + p.d0 / lam);
    double em = std::exp(-lam * t), ep = std::exp(lam * t);
    return {p.rho0 / m.c + A * em + B * ep, lam * (B * ep - A * em)};
}

// Oscillation coefficients of the underdamped indicator:
// Gamma = rho0/c + e^{-t/(2 eps)} (P cos(mu t) + S sin(mu t)) / c.
struct WeakCoeffs {
    double P, S;
};

WeakCoeffs weak_coeffs(const RelaxationWeak& m, const PointData& p) {
    double mu = m.mu();
    return {m.c - p.rho0,
            (2.0 * m.eps * m.c * p.d0 + m.c - p.rho0) / (2.0 * m.eps * mu)};
}

GammaPair gamma_weak(const RelaxationWeak& m, const PointData& p, double t) {
    double mu = m.mu();
    WeakCoeffs w = weak_coeffs(m, p);
    double env = std::exp(-t / (2.0 * m.eps)) / m.c;
    double s = std::sin(mu * t), co = std::cos(mu * t);
    double half = 1.0 / (2.0 * m.eps);
    return {p.rho0 / m.c + env * (w.P * co + w.S * s),
            env * ((mu * w.S - w.P * half) * co - (mu * w.P + w.S * half) * s)};
}

GammaPair gamma_strong(const RelaxationStrong& m, const PointData& p, double t) {
    double w = m.omega();
    double lam = 1.0 / (2.0 * m.eps);
    double a = 0.5 * (1.0 - p.rho0 / m.c);
    double b = (1.0 - p.rho0 / m.c) / (4.0 * m.eps * w) + p.d0 / (2.0 * w);
    double edown = std::exp(-(w + lam) * t);
    double eup = std::exp((w - lam) * t);
    return {(1.0 - 2.0 * a) + (a - b) * edown + (a + b) * eup,
            -(w + lam) * (a - b) * edown + (w - lam) * (a + b) * eup};
}

// Margins: signed distance to the critical surface, positive = global side.

double margin_zero(const ZeroBackground& m, const PointData& p) {
    double kr = m.k * p.rho0;
    if (kr > 0.0) return p.d0 + std::sqrt(2.0 * kr);
    if (kr == 0.0) return p.d0;  // linear indicator 1 + d0 t
    return -kInf;                // attractive force with mass: always breaks down
}

double margin_const(const ConstantBackground& m, const PointData& p) {
    if (m.k > 0.0) {
        // Amplitude form of |d0| < sqrt(k (2 rho0 - c)); stays real when the
        // right-hand side does not.
        double r = p.rho0 / m.c;
        return r - std::sqrt(p.d0 * p.d0 / (m.c * m.k) + (r - 1.0) * (r - 1.0));
    }
    double lam = std::sqrt(-m.c * m.k);
    return p.d0 + (1.0 - p.rho0 / m.c) * lam;
}

double margin_weak(const RelaxationWeak& m, const InitialData& data, double alpha) {
    PointData p = point_data(data, alpha);
    if (p.d0 == 0.0 && p.rho0 == m.c) return p.rho0;  // indicator identically one
    CriticalTimeWeak ct = critical_time_weak(m, data, alpha);
    WeakCoeffs w = weak_coeffs(m, p);
    return p.rho0 * std::exp(ct.t_star / (2.0 * m.eps)) - std::hypot(w.P, w.S);
}

double margin_strong(const RelaxationStrong& m, const PointData& p) {
    double edge = -(1.0 - p.rho0 / m.c) * (m.omega() + 1.0 / (2.0 * m.eps));
    return p.d0 - std::min(0.0, edge);
}

// Whether a configuration sitting exactly on the surface (margin == 0) is
// still smooth: the oscillatory and underdamped thresholds are strict, the
// attractive-background one is not, and the degenerate linear indicator
// 1 + d0 t survives d0 = 0.
bool global_on_boundary(const Model1D& model, const PointData& p) {
    if (const auto* z = std::get_if<ZeroBackground>(&model))
        return z->k * p.rho0 == 0.0;
    if (const auto* cb = std::get_if<ConstantBackground>(&model)) return cb->k < 0.0;
    return false;
}

// First sign change of f on [lo, hi] sampled at n+1 points, polished to a
// root. Returns +inf when f stays positive.
double first_crossing(const std::function<double(double)>& f, double lo, double hi, int n) {
    double prev_t = lo, prev_v = f(lo);
    if (prev_v <= 0.0) return lo;
    int best_i = 0;
    double best_v = prev_v;
    for (int i = 1; i <= n; ++i) {
        double t = lo + (hi - lo) * static_cast<double>(i) / n;
        double v = f(t);
        if (v <= 0.0) {
            if (v == 0.0) return t;
            RootOptions opts;
            return find_root(f, prev_t, t, opts);
        }
        if (v < best_v) { best_v = v; best_i = i; }
        prev_t = t;
        prev_v = v;
    }
    // Tangency guard: a double root never changes sign, so chase the minimum.
    double a = lo + (hi - lo) * static_cast<double>(std::max(0, best_i - 1)) / n;
    double b = lo + (hi - lo) * static_cast<double>(std::min(n, best_i + 1)) / n;
    double tm = minimize_scalar(f, a, b);
    if (f(tm) <= 1e-10) return tm;
    return kInf;
}

double blowup_zero(const ZeroBackground& m, const PointData& p) {
    double kr = m.k * p.rho0;
    if (kr == 0.0) {
        if (p.d0 < 0.0) return -1.0 / p.d0;
        throw DomainError("blowup_time_1d: configuration is globally smooth");
    }
    // Gamma = (kr/2) t^2 + d0 t + 1; earliest positive root, computed from
    // the cancellation-free root pair q/a and 1/q.
    double a = 0.5 * kr;
    double disc = p.d0 * p.d0 - 2.0 * kr;
    if (disc < 0.0) throw DomainError("blowup_time_1d: configuration is globally smooth");
    double sq = std::sqrt(disc);
    double q = -0.5 * (p.d0 + (p.d0 >= 0.0 ? sq : -sq));
    double best = kInf;
    if (q != 0.0) {
        double r1 = q / a, r2 = 1.0 / q;
        if (r1 > 0.0) best = std::min(best, r1);
        if (r2 > 0.0) best = std::min(best, r2);
    } else {
        double r = std::sqrt(-1.0 / a);  // d0 = 0, kr < 0
        best = r;
    }
    if (!std::isfinite(best))
        throw DomainError("blowup_time_1d: configuration is globally smooth");
    return best;
}

double blowup_const(const ConstantBackground& m, const InitialData& data, double alpha) {
    PointData p = point_data(data, alpha);
    auto g = [&](double t) { return gamma_const(m, p, t).gamma; };
    if (m.k > 0.0) {
        double period = 2.0 * kPi / std::sqrt(m.c * m.k);
        double t = first_crossing(g, 0.0, period, 512);
        if (std::isfinite(t)) return t;
        throw DomainError("blowup_time_1d: configuration is globally smooth");
    }
    double lam = std::sqrt(-m.c * m.k);
    double B = 0.5 * (1.0 - p.rho0 / m.c + p.d0 / lam);
    if (B >= 0.0) throw DomainError("blowup_time_1d: configuration is globally smooth");
    double lo = 0.0, hi = 2.0 / lam;
    while (g(hi) >= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12 / lam) throw NumericsError("blowup_time_1d: bracket expansion failed");
    }
    RootOptions opts;
    return find_root(g, lo, hi, opts);
}

double blowup_weak(const RelaxationWeak& m, const InitialData& data, double alpha) {
    PointData p = point_data(data, alpha);
    double mu = m.mu();
    WeakCoeffs w = weak_coeffs(m, p);
    double amp = std::hypot(w.P, w.S);
    auto g = [&](double t) { return gamma_weak(m, p, t).gamma; };
    // Past t_env the decaying envelope keeps Gamma above zero forever.
    double t_env = (p.rho0 > 0.0 && amp > p.rho0)
                       ? 2.0 * m.eps * std::log(amp / p.rho0)
                       : 0.0;
    double period = 2.0 * kPi / mu;
    double t_max = t_env + period;
    int n = static_cast<int>(std::min(200000.0, 256.0 * std::ceil(t_max / period)));
    double t = first_crossing(g, 0.0, t_max, n);
    if (std::isfinite(t)) return t;
    throw DomainError("blowup_time_1d: configuration is globally smooth");
}

}  // namespace

ZeroBackground::ZeroBackground(double k_) : k(k_) {
    if (!std::isfinite(k)) throw std::invalid_argument("ZeroBackground: k must be finite");
}

ConstantBackground::ConstantBackground(double k_, double c_) : k(k_), c(c_) {
    if (!std::isfinite(k) || k == 0.0)
        throw std::invalid_argument("ConstantBackground: k must be finite and nonzero");
    if (!(c > 0.0)) throw std::invalid_argument("ConstantBackground: c must be positive");
}

RelaxationWeak::RelaxationWeak(double k_, double c_, double eps_) : k(k_), c(c_), eps(eps_) {
    if (!(k > 0.0) || !(c > 0.0))
        throw std::invalid_argument("RelaxationWeak: requires k > 0 and c > 0");
    if (!(eps > 0.5 / std::sqrt(c * k)))
        throw std::invalid_argument("RelaxationWeak: requires eps > 1/(2 sqrt(ck))");
}

double RelaxationWeak::mu() const { return std::sqrt(c * k - 0.25 / (eps * eps)); }

RelaxationStrong::RelaxationStrong(double k_, double c_, double eps_)
    : k(k_), c(c_), eps(eps_) {
    if (!(k > 0.0) || !(c > 0.0))
        throw std::invalid_argument("RelaxationStrong: requires k > 0 and c > 0");
    if (!(eps > 0.0) || !(eps < 0.5 / std::sqrt(c * k)))
        throw std::invalid_argument("RelaxationStrong: requires 0 < eps < 1/(2 sqrt(ck))");
}

double RelaxationStrong::omega() const { return std::sqrt(0.25 / (eps * eps) - c * k); }

GammaPair gamma_1d(const Model1D& model, const InitialData& data, double alpha, double t) {
    PointData p = point_data(data, alpha);
    return std::visit(
        [&](const auto& m) -> GammaPair {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ZeroBackground>) return gamma_zero(m, p, t);
            else if constexpr (std::is_same_v<T, ConstantBackground>) return gamma_const(m, p, t);
            else if constexpr (std::is_same_v<T, RelaxationWeak>) return gamma_weak(m, p, t);
            else return gamma_strong(m, p, t);
        },
        model);
}

CharacteristicState solution_along_characteristic(const Model1D& model,
                                                  const InitialData& data, double alpha,
                                                  double t) {
    GammaPair g = gamma_1d(model, data, alpha, t);
    if (!(g.gamma > 0.0))
        throw BlowupError("solution_along_characteristic: indicator vanished before "
                          "the requested time",
                          0.0, t);
    double rho0 = data.rho0.eval(alpha);
    return {rho0 / g.gamma, g.gamma_t / g.gamma};
}

double margin_1d(const Model1D& model, const InitialData& data, double alpha) {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, RelaxationWeak>) return margin_weak(m, data, alpha);
            else {
                PointData p = point_data(data, alpha);
                if constexpr (std::is_same_v<T, ZeroBackground>) return margin_zero(m, p);
                else if constexpr (std::is_same_v<T, ConstantBackground>) return margin_const(m, p);
                else return margin_strong(m, p);
            }
        },
        model);
}

double blowup_time_1d(const Model1D& model, const InitialData& data, double alpha) {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ZeroBackground>)
                return blowup_zero(m, point_data(data, alpha));
            else if constexpr (std::is_same_v<T, ConstantBackground>)
                return blowup_const(m, data, alpha);
            else if constexpr (std::is_same_v<T, RelaxationWeak>)
                return blowup_weak(m, data, alpha);
            else
                throw DomainError(
                    "blowup_time_1d: the overdamped model carries no breakdown "
                    "certificate");
        },
        model);
}

Verdict verdict_1d(const Model1D& model, const InitialData& data, const AlphaGrid& alphas) {
    if (alphas.count < 1) throw std::invalid_argument("verdict_1d: empty label grid");

    auto margin_fn = [&](double a) { return margin_1d(model, data, a); };
    auto [worst_alpha, worst_margin] = grid_minimize(margin_fn, alphas);

    Verdict v;
    v.margin = worst_margin;
    v.witness_alpha = worst_alpha;

    if (std::holds_alternative<RelaxationStrong>(model)) {
        v.kind = worst_margin > 0.0 ? VerdictKind::GlobalSufficient
                                    : VerdictKind::Indeterminate;
        return v;
    }

    bool global = worst_margin > 0.0;
    if (worst_margin == 0.0)
        global = global_on_boundary(model, point_data(data, worst_alpha));
    if (global) {
        v.kind = VerdictKind::Global;
        return v;
    }

    v.kind = VerdictKind::Breakdown;
    auto tc_fn = [&](double a) {
        try {
            return blowup_time_1d(model, data, a);
        } catch (const DomainError&) {
            return kInf;  // this label is smooth; ignore it in the minimum
        }
    };
    auto [tc_alpha, tc] = grid_minimize(tc_fn, alphas);
    if (std::isfinite(tc)) {
        v.t_c = tc;
        v.witness_alpha = tc_alpha;
    }
    return v;
}

RegimeClassification classify_regime(double d0, double rho0, double k) {
    if (!(k > 0.0))
        throw std::invalid_argument(
            "classify_regime: attractive forces always break down; requires k > 0");
    if (!(rho0 > 0.0)) throw std::invalid_argument("classify_regime: requires rho0 > 0");

    double kr = k * rho0;
    double s1 = std::sqrt(kr), s2 = std::sqrt(2.0 * kr);
    RegimeClassification rc;
    if (d0 >= s1) {
        rc.case_id = "1i";
        return rc;
    }
    if (d0 <= -s2) {
        rc.case_id = "3";
        rc.t_c_minus = (-d0 - std::sqrt(d0 * d0 - 2.0 * kr)) / kr;
        return rc;
    }
    double spread = std::sqrt(2.0 * kr - d0 * d0);
    rc.d_max = kr / spread;
    rc.t_e_plus = (spread - d0) / kr;
    if (d0 > 0.0) {
        rc.case_id = "1ii";
    } else if (d0 > -s1) {
        rc.case_id = "2i";
        rc.t_zero = -d0 / kr + 0.0;  // +0.0 keeps d0 == 0 from printing as -0
    } else {
        rc.case_id = "2ii";
        rc.d_min = -kr / spread;
        rc.t_e_minus = (-spread - d0) / kr;
    }
    return rc;
}

CriticalTimeWeak critical_time_weak(const RelaxationWeak& model, const InitialData& data,
                                    double alpha) {
    PointData p = point_data(data, alpha);
    double mu = model.mu();
    CriticalTimeWeak out{0.0, 0, mu};

    double thr = 2.0 * model.eps * model.k * (p.rho0 - model.c);
    if (p.d0 == 0.0) {
        if (p.rho0 == model.c)
            throw DomainError(
                "critical_time_weak: indicator is identically one; no interior minimum");
        // Boundary between branches: the tangent is zero, the minimum sits at
        // the half- or full-period mark.
        out.t_star = (p.rho0 < model.c ? kPi : 2.0 * kPi) / mu;
        out.quadrant = p.rho0 < model.c ? 2 : 4;
        return out;
    }
    double den = p.d0 - thr;
    if (den == 0.0) {
        out.t_star = (p.d0 < 0.0 ? 0.5 : 1.5) * kPi / mu;
        out.quadrant = p.d0 < 0.0 ? 1 : 3;
        return out;
    }
    double raw = std::atan(2.0 * model.eps * mu * p.d0 / den);
    double shift;
    if (p.d0 < 0.0 && p.d0 < thr) {
        shift = 0.0;
        out.quadrant = 1;
    } else if (p.d0 < 0.0) {
        shift = kPi;
        out.quadrant = 2;
    } else if (p.d0 > thr) {
        shift = kPi;
        out.quadrant = 3;
    } else {
        shift = 2.0 * kPi;
        out.quadrant = 4;
    }
    out.t_star = (raw + shift) / mu;
    return out;
}

}  // namespace epcrit
