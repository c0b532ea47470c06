#include "epcrit/flowmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "epcrit/riccati.hpp"

namespace epcrit {
namespace {

// Inverts a strictly increasing map g (with g(0) = 0) at the value target by
// geometric bracket growth followed by Brent polish.
double invert_increasing(const std::function<double(double)>& g, double target) {
    if (target == 0.0) return 0.0;
    double hi = 1.0, lo = 0.0;
    for (int i = 0; i < 200 && g(hi) < target; ++i) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi))
            throw NumericsError("flow map: parameter bracket expansion failed");
    }
    if (g(hi) < target) throw NumericsError("flow map: parameter bracket expansion failed");
    RootOptions opts;
    return find_root([&](double x) { return g(x) - target; }, lo, hi, opts);
}

void require_nu(const IsotropicConfig& cfg, int nu, const char* op) {
    if (cfg.nu != nu)
        throw std::invalid_argument(std::string(op) + ": configured symmetry index differs");
}

void require_time(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("flow map: requires t >= 0");
}

}  // namespace

IsotropicConfig::IsotropicConfig(int nu_, double k_, InitialData data_)
    : nu(nu_), k(k_), data(std::move(data_)) {
    if (nu < 0) throw std::invalid_argument("IsotropicConfig: requires nu >= 0");
    if (!(k > 0.0)) throw std::invalid_argument("IsotropicConfig: requires k > 0");
}

double IsotropicConfig::n0(double alpha) const {
    double v = data.rho0.eval(alpha);
    if (v < 0.0) throw DomainError("IsotropicConfig: n0 must be nonnegative");
    return v;
}

double IsotropicConfig::u0(double alpha, bool allow_zero) const {
    double v = data.u0.eval(alpha);
    if (!(v > 0.0) && !(allow_zero && v == 0.0))
        throw DomainError("IsotropicConfig: outgoing initial velocity u0 > 0 required");
    return v;
}

double IsotropicConfig::du0(double alpha) const { return data.u0.deriv(alpha); }

double IsotropicConfig::e0(double alpha) const { return weighted_mass(data.rho0, nu, alpha); }

double IsotropicConfig::E0(double alpha) const { return weighted_field(data.rho0, nu, alpha); }

SphericalParams spherical_params(double alpha, double u0, double e0, double k) {
    if (!(alpha > 0.0) || !(u0 > 0.0) || !(e0 > 0.0) || !(k > 0.0))
        throw std::invalid_argument("spherical_params: requires alpha, u0, e0, k > 0");
    SphericalParams p;
    p.Q = std::sqrt(u0 * u0 + 2.0 * k * e0 / alpha);
    p.R = 2.0 * k * e0 / (p.Q * p.Q);
    p.tau0 = std::acosh(2.0 * alpha / p.R - 1.0);
    return p;
}

FlowPoint flow_planar(const IsotropicConfig& cfg, double alpha, double t) {
    require_nu(cfg, 0, "flow_planar");
    require_time(t);
    double u0 = cfg.u0(alpha), e0 = cfg.e0(alpha);
    double r = alpha + u0 * t + 0.5 * cfg.k * e0 * t * t;
    if (!(r > 0.0)) throw DomainError("flow_planar: particle reached the origin");
    return {r, u0 + cfg.k * e0 * t, t, std::nullopt};
}

FlowPoint flow_cylindrical(const IsotropicConfig& cfg, double alpha, double t) {
    require_nu(cfg, 1, "flow_cylindrical");
    require_time(t);
    if (!(alpha > 0.0))
        throw std::invalid_argument("flow_cylindrical: requires alpha > 0");
    double u0 = cfg.u0(alpha), e0 = cfg.e0(alpha);
    double ke0 = cfg.k * e0;

    double tau;
    if (ke0 == 0.0) {
        tau = std::log1p(u0 * t / alpha) / u0;
    } else {
        auto time_of_tau = [&](double s) {
            QuadOptions q;
            q.rel_tol = 1e-10;
            return alpha * quad([&](double xi) {
                return std::exp(0.5 * ke0 * xi * xi + u0 * xi);
            }, 0.0, s, q);
        };
        tau = invert_increasing(time_of_tau, t);
    }
    double r = alpha * std::exp(0.5 * ke0 * tau * tau + u0 * tau);
    double u = std::sqrt(u0 * u0 + 2.0 * ke0 * std::log(r / alpha));
    return {r, u, t, tau};
}

FlowPoint flow_spherical(const IsotropicConfig& cfg, double alpha, double t) {
    require_nu(cfg, 2, "flow_spherical");
    require_time(t);
    if (!(alpha > 0.0)) throw std::invalid_argument("flow_spherical: requires alpha > 0");
    double u0 = cfg.u0(alpha), e0 = cfg.e0(alpha);
    if (e0 == 0.0) return {alpha + u0 * t, u0, t, std::nullopt};  // free streaming

    SphericalParams p = spherical_params(alpha, u0, e0, cfg.k);
    auto time_of_tau = [&](double s) {
        return 0.5 * p.R / p.Q * (s + std::sinh(s + p.tau0) - std::sinh(p.tau0));
    };
    double tau = invert_increasing(time_of_tau, t);
    double r = 0.5 * p.R * (1.0 + std::cosh(tau + p.tau0));
    double u = p.Q * std::sqrt(std::max(0.0, 1.0 - p.R / r));
    return {r, u, t, tau};
}

FlowPoint flow_nu3(const IsotropicConfig& cfg, double alpha, double t) {
    require_nu(cfg, 3, "flow_nu3");
    require_time(t);
    if (!(alpha > 0.0)) throw std::invalid_argument("flow_nu3: requires alpha > 0");
    double u0 = cfg.u0(alpha, /*allow_zero=*/true);
    double e0 = cfg.e0(alpha);
    double q = u0 * u0 + cfg.k * e0 / (alpha * alpha);
    double r = std::sqrt(alpha * alpha + 2.0 * alpha * u0 * t + q * t * t);
    return {r, (alpha * u0 + q * t) / r, t, std::nullopt};
}

FlowPoint flow_point(const IsotropicConfig& cfg, double alpha, double t) {
    switch (cfg.nu) {
        case 0: return flow_planar(cfg, alpha, t);
        case 1: return flow_cylindrical(cfg, alpha, t);
        case 2: return flow_spherical(cfg, alpha, t);
        case 3: return flow_nu3(cfg, alpha, t);
        default:
            throw std::invalid_argument(
                "flow_point: closed forms exist only for nu in {0,1,2,3}");
    }
}

std::pair<double, double> flow_bounds(int nu, double alpha, double u0, double e0,
                                      double k, double t) {
    if (nu < 1)
        throw std::invalid_argument("flow_bounds: nu = 0 has an exact formula instead");
    if (!(alpha > 0.0) || !(u0 > 0.0) || !(k > 0.0) || e0 < 0.0 || !(t >= 0.0))
        throw std::invalid_argument("flow_bounds: inadmissible arguments");
    double ke0 = k * e0;

    if (nu == 1) {
        double lo = std::sqrt(alpha * alpha + 2.0 * alpha * u0 * t + ke0 * t * t);
        double floor = e0 > 0.0 ? alpha * std::exp(-u0 * u0 / (2.0 * ke0)) : 0.0;
        double hi;
        if (ke0 == 0.0) {
            hi = alpha + u0 * t;
        } else {
            // r'' = ke0/r <= ke0/sqrt(q(s)) with q the lower bound above;
            // integrating twice gives the upper envelope. The inner integral
            // has the closed form F below.
            auto F = [&](double s) {
                double qs = ke0 * s * s + 2.0 * alpha * u0 * s + alpha * alpha;
                return std::log(ke0 * s + alpha * u0 + std::sqrt(ke0) * std::sqrt(qs)) /
                       std::sqrt(ke0);
            };
            QuadOptions q;
            double accum = quad([&](double s) { return F(s) - F(0.0); }, 0.0, t, q);
            hi = alpha + u0 * t + ke0 * accum;
        }
        return {std::max(lo, floor), hi};
    }

    double np1 = nu + 1.0;
    double lo = std::pow(std::pow(alpha, np1) + np1 * std::pow(alpha, nu) * u0 * t +
                             0.5 * np1 * ke0 * t * t,
                         1.0 / np1);
    double floor = 0.0;
    if (e0 > 0.0) {
        floor = std::pow((nu - 1.0) * u0 * u0 / (2.0 * ke0) + std::pow(alpha, 1.0 - nu),
                         -1.0 / (nu - 1.0));
    }
    double hi = alpha +
                std::sqrt(u0 * u0 + 2.0 * ke0 / ((nu - 1.0) * std::pow(alpha, nu - 1.0))) * t;
    return {std::max(lo, floor), hi};
}

Trajectory indicator_trajectory(const IsotropicConfig& cfg, double alpha, double t_end,
                                bool halt_on_zero) {
    if (!(alpha >= 0.0))
        throw std::invalid_argument("indicator_trajectory: requires alpha >= 0");
    if (cfg.nu >= 1 && alpha == 0.0)
        throw std::invalid_argument("indicator_trajectory: alpha = 0 needs nu = 0");
    double u0 = cfg.u0(alpha, /*allow_zero=*/cfg.nu == 3);
    double e0 = cfg.e0(alpha);
    double rho0 = cfg.rho0(alpha);
    double k = cfg.k;
    int nu = cfg.nu;

    IvpSpec spec;
    spec.rhs = [k, e0, rho0, nu](double, const std::vector<double>& y,
                                 std::vector<double>& dy) {
        double rpow = std::pow(y[0], -nu);
        dy[0] = y[1];
        dy[1] = k * e0 * rpow;
        dy[2] = y[3];
        dy[3] = k * rho0 * rpow - k * nu * e0 * rpow / y[0] * y[2];
    };
    spec.y0 = {alpha, u0, 1.0, cfg.du0(alpha)};
    spec.t1 = t_end;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-14;
    spec.events.push_back(
        Event{[](double, const std::vector<double>& y) { return y[2]; }, halt_on_zero});
    return integrate(spec);
}

IndicatorPoint indicator_multid(const IsotropicConfig& cfg, double alpha, double t) {
    require_time(t);
    Trajectory traj = indicator_trajectory(cfg, alpha, t, false);
    if (traj.status != IvpStatus::Done)
        throw NumericsError("indicator_multid: integration failed");
    IndicatorPoint out{traj.final_state()[2], traj.final_state()[3], std::nullopt};
    if (!traj.events.empty()) out.first_zero = traj.events.front().t;
    return out;
}

RadialState solution_multid(const IsotropicConfig& cfg, double alpha, double t) {
    require_time(t);
    Trajectory traj = indicator_trajectory(cfg, alpha, t, false);
    if (traj.status != IvpStatus::Done)
        throw NumericsError("solution_multid: integration failed");
    const std::vector<double>& y = traj.final_state();
    double r = y[0], gamma = y[2], gamma_t = y[3];
    if (!(gamma > 0.0) || !traj.events.empty()) {
        double tz = traj.events.empty() ? t : traj.events.front().t;
        double pad = 1e-12 * tz + 1e-15;
        throw BlowupError("solution_multid: indicator vanished before the requested time",
                          (traj.events.empty() ? 0.0 : tz) - pad, tz + pad);
    }
    double n = cfg.n0(alpha) * std::pow(alpha, cfg.nu) / (std::pow(r, cfg.nu) * gamma);
    return {n, gamma_t / gamma};
}

}  // namespace epcrit
