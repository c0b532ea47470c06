#pragma once
// Critical-threshold verdicts for the radial models. The planar half-line
// case (nu = 0) and the four-dimensional case (nu = 3) have exact
// thresholds; nu = 1 and nu >= 2 carry a band: a lower edge in u0' below
// which breakdown is certain and an upper edge above which global smoothness
// is certain, with an undecided gap between.

#include <optional>

#include "epcrit/flowmap.hpp"
#include "epcrit/verdict.hpp"

namespace epcrit {

struct ThresholdBand {
    double lower;                 // u0' at or below => breakdown certified
    double upper;                 // u0' strictly above => global certified
    std::optional<double> exact;  // set when the threshold is sharp
};

// Exact threshold u0' > -sqrt(2 k n0) on the half line. Breakdown verdicts
// carry t_c = 2 / sup{ -u0' + sqrt(u0'^2 - 2 k n0) } over the violating
// labels.
Verdict verdict_planar_halfline(const IsotropicConfig& cfg, const AlphaGrid& alphas);

// Root h(alpha) of
//   k a^2 n0 u0 * integral_0^h (h - eta) e^eta [u0^2 + 2 k e0 eta]^{-3/2} deta = 1;
// the left side grows monotonically from 0, so the root is unique. Returns
// +infinity when n0(alpha) = 0 (the integral scale collapses and the global
// condition degenerates).
double h_cylindrical(const IsotropicConfig& cfg, double alpha);

// Band verdict for nu = 1: breakdown iff u0' <= -sqrt(2 k n0) somewhere
// (t_c then carries the parametric horizon through the first zero of
// b(tau) = 1 + alpha u0' tau + (k/2) alpha rho0 tau^2, an upper bound for
// the blow-up time); global iff u0' > -(k/u0)[alpha n0 h - E0] everywhere.
Verdict verdict_cylindrical(const IsotropicConfig& cfg, const AlphaGrid& alphas);

// Lower threshold only, nu >= 2: breakdown certified when
// u0' < -(k/u0)[n0 alpha/(nu-1) - E0] at some label; otherwise Indeterminate.
Verdict verdict_spherical_lower(const IsotropicConfig& cfg, const AlphaGrid& alphas);

// Root h_nu(alpha) in (0, alpha^{1-nu}) of
//   (k u0 n0 alpha/(nu-1)^2) * integral_0^{h} (h - eta)
//       [u0^2 + 2 k e0 eta/(nu-1)]^{-3/2} (alpha^{1-nu} - eta)^{nu/(1-nu)} deta = 1.
// The weight is singular at the interval cap, so the search bracket stays at
// relative distance 1e-8 from it; if the left side has not reached 1 there
// (possible for nu >= 3), or n0 = 0, returns +infinity.
double h_general(const IsotropicConfig& cfg, double alpha);

// Band verdict for nu >= 2, nu != 3, combining the lower edge above with the
// upper edge u0' > -(k/u0)[n0 alpha^nu h_nu/(nu-1) - E0].
Verdict verdict_general_nu(const IsotropicConfig& cfg, const AlphaGrid& alphas);

// Exact verdict for nu = 3 from positivity of the indicator numerator
// q(t) = alpha + B t + C t^2, B = u0 + alpha u0', C = u0 u0' - k E0 + k n0 alpha/2,
// together with the origin condition u0'(0) >= 0. Breakdown carries the
// earliest positive root of q over the violating labels.
Verdict verdict_nu3(const IsotropicConfig& cfg, const AlphaGrid& alphas);

// Dispatch on cfg.nu to the appropriate verdict.
Verdict verdict_multid(const IsotropicConfig& cfg, const AlphaGrid& alphas);

// The threshold edges in u0' at one label for the configured nu.
ThresholdBand band(const IsotropicConfig& cfg, double alpha);

namespace detail {

// Core monotone root solvers, exposed for scaling/monotonicity tests.
// cylindrical_root solves pref * I(h) = 1 with
//   I(h) = integral_0^h (h - eta) e^eta [u0sq + slope eta]^{-3/2} deta;
// general_root does the same with weight (cap - eta)^expo instead of e^eta,
// searching (0, cap(1 - 1e-8)]; returns +infinity when no root is reached.
double cylindrical_root(double pref, double u0sq, double slope);
double general_root(double pref, double u0sq, double slope, double cap, double expo);

// Earliest positive zero of q(t) = alpha + B t + C t^2, +infinity when none.
double earliest_quadratic_root(double alpha, double B, double C);

// Exact nu = 3 threshold in u0' at one label (the edge of the global set).
double nu3_threshold(double alpha, double u0, double E0, double n0, double k);

}  // namespace detail

}  // namespace epcrit
