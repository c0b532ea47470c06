#pragma once
// Time series along a single characteristic, ready for CSV export: position,
// velocity, indicator, density and velocity gradient at uniformly spaced
// sample times, truncated at gradient blow-up when one occurs.

#include <array>
#include <optional>
#include <vector>

#include "epcrit/flowmap.hpp"
#include "epcrit/thresholds1d.hpp"

namespace epcrit {

struct TraceRow {
    double t;
    double r;        // position (x on the line, radius in the radial models)
    double u;        // velocity along the characteristic
    double gamma;    // indicator d r / d alpha
    double gamma_t;  // its time derivative
    double n;        // density
    double u_r;      // velocity gradient gamma_t / gamma
};

struct TraceResult {
    std::vector<TraceRow> rows;  // gamma > 0 throughout
    // Set when the indicator vanished at or before the horizon; rows then end
    // just short of the bracket.
    std::optional<std::array<double, 2>> blowup_bracket;
};

// One-dimensional models. The position column integrates the characteristic
// system x' = u, u' = k E - u/eps, E' = -c u (zero-mean-field gauge); the
// initial field E0(alpha) integrates rho0 - c from the origin (half-line
// data) or symmetrically over [-domain_cut, domain_cut] (full-line data).
TraceResult trace_1d(const Model1D& model, const InitialData& data, double alpha,
                     double t_end, int samples, double domain_cut = 100.0);

// Radial models: samples the integrated (r, u, Gamma, Gamma_t) trajectory.
TraceResult trace_multid(const IsotropicConfig& cfg, double alpha, double t_end,
                         int samples);

}  // namespace epcrit
