#pragma once
// Maximum-principle envelopes for the viscous model. The ratio
// beta = u_x / rho obeys a parabolic equation whose extrema drift linearly,
//     inf_x beta(x,0) + k t  <=  beta(x,t)  <=  sup_x beta(x,0) + k t,
// which turns into two-sided bounds on the density and the velocity gradient
// along particle paths, and into one-sided smoothness/breakdown certificates.

#include <utility>

#include "epcrit/profiles.hpp"
#include "epcrit/verdict.hpp"

namespace epcrit {

struct BetaEnvelope {
    BetaEnvelope(double beta_inf0, double beta_sup0, double k);
    double beta_inf0, beta_sup0;
    double k;  // repulsive coupling; k = 0 (no forcing) is allowed
};

// (inf + kt, sup + kt); requires t >= 0.
std::pair<double, double> beta_bounds(const BetaEnvelope& env, double t);

// rho0 / (rho0 (k t^2/2 + sup t) + 1) <= rho <= rho0 / (rho0 (k t^2/2 + inf t) + 1).
// Once the lower-edge denominator reaches zero the envelope has crossed the
// threshold; throws BlowupError bracketing that vanishing time.
std::pair<double, double> rho_bounds_viscous(const BetaEnvelope& env, double rho0_alpha,
                                             double t);

// Bounds on d = u_x = beta * rho from the product of the two envelopes.
std::pair<double, double> d_bounds_viscous(const BetaEnvelope& env, double rho0_alpha,
                                           double t);

// One-sided threshold sweep: with T = -sqrt(2k / max_alpha rho0),
// BreakdownSufficient when sup beta0 < T (t_c then carries the upper bound on
// the blow-up time from the envelope denominator), GlobalSufficient when
// inf beta0 > T, otherwise Indeterminate.
Verdict verdict_viscous(const InitialData& data, double k, const AlphaGrid& alphas);

struct FdBetaReport {
    double max_beta_drift;        // max_t max_x |beta - (beta0 + k t)|
    double max_rho_envelope_gap;  // disagreement of the transported density
                                  // with the envelope formula
    int steps;
    double dt;
};

// Desk-scale explicit finite-difference evolution of the beta equation
//     beta_t + u beta_x = k + beta_xx / rho
// on the fixed spatial grid, with u and rho transported along the exact
// characteristics. Only spatially constant beta0 is accepted (there the
// envelope is tight and beta0 + k t is the exact solution, so any spatial
// oscillation is scheme noise). The time step is derived from the advective
// and diffusive stability limits; an unreasonably small stable step raises
// an error suggesting a coarser grid or shorter horizon.
FdBetaReport fd_beta_check(const InitialData& data, double k, const AlphaGrid& grid,
                           double t_end);

}  // namespace epcrit
