#pragma once
// Radial flow maps r(alpha, t) of the isotropic repulsive Euler-Poisson
// system. Along a particle path the weighted field e = E r^nu is frozen at
// e0(alpha), so the path solves r'' = k e0 r^{-nu} with r(0) = alpha,
// r'(0) = u0(alpha) > 0. Closed or parametric forms exist for
// nu = 0, 1, 2, 3; the indicator Gamma = dr/dalpha solves the variational
// equation alongside.

#include <cmath>
#include <optional>
#include <utility>

#include "epcrit/oracle.hpp"
#include "epcrit/profiles.hpp"

namespace epcrit {

struct IsotropicConfig {
    IsotropicConfig(int nu, double k, InitialData data);

    int nu;
    double k;
    InitialData data;

    // Point accessors with admissibility checks (n0 >= 0, u0 > 0; u0 = 0 is
    // tolerated only where a closed form stays valid, see flow_nu3).
    double n0(double alpha) const;
    double u0(double alpha, bool allow_zero = false) const;
    double du0(double alpha) const;
    double e0(double alpha) const;  // integral_0^alpha n0 s^nu ds
    double E0(double alpha) const;  // alpha^{-nu} e0
    double rho0(double alpha) const { return n0(alpha) * std::pow(alpha, nu); }
};

struct FlowPoint {
    double r;
    double u;
    double t;
    std::optional<double> tau;  // parameter value for the nu = 1, 2 forms
};

// Parameters of the spherical (nu = 2) parametrization
// r = (R/2)[1 + cosh(tau + tau0)].
struct SphericalParams {
    double Q;     // asymptotic speed sqrt(u0^2 + 2 k e0 / alpha)
    double R;     // 2 k e0 / Q^2
    double tau0;  // cosh(tau0) = 2 alpha / R - 1
};

SphericalParams spherical_params(double alpha, double u0, double e0, double k);

FlowPoint flow_planar(const IsotropicConfig& cfg, double alpha, double t);
FlowPoint flow_cylindrical(const IsotropicConfig& cfg, double alpha, double t);
FlowPoint flow_spherical(const IsotropicConfig& cfg, double alpha, double t);
FlowPoint flow_nu3(const IsotropicConfig& cfg, double alpha, double t);

// Dispatch on cfg.nu to one of the four forms above.
FlowPoint flow_point(const IsotropicConfig& cfg, double alpha, double t);

// Two-sided bounds on r(alpha, t) for nu >= 1, including the time-independent
// positive floors guaranteed by the energy integral.
std::pair<double, double> flow_bounds(int nu, double alpha, double u0, double e0,
                                      double k, double t);

struct IndicatorPoint {
    double gamma;
    double gamma_t;
    std::optional<double> first_zero;  // earliest Gamma crossing in [0, t]
};

// Integrates the coupled system (r, r', Gamma, Gamma') with
// r'' = k e0 r^{-nu}, Gamma'' = k rho0 r^{-nu} - k nu e0 r^{-(nu+1)} Gamma,
// rho0 = n0 alpha^nu, from (alpha, u0, 1, u0').
IndicatorPoint indicator_multid(const IsotropicConfig& cfg, double alpha, double t);

// The underlying trajectory, exposed for oracle work: state layout
// (r, r', Gamma, Gamma'). With halt_on_zero the integration stops at the
// first Gamma zero-crossing (recorded as event 0).
Trajectory indicator_trajectory(const IsotropicConfig& cfg, double alpha, double t_end,
                                bool halt_on_zero = false);

struct RadialState {
    double n;    // n0 alpha^nu / (r^nu Gamma)
    double u_r;  // Gamma_t / Gamma
};

// Throws BlowupError once Gamma has vanished at or before t.
RadialState solution_multid(const IsotropicConfig& cfg, double alpha, double t);

}  // namespace epcrit
