#pragma once
// Closed-form indicator functions, critical-threshold verdicts, regime
// classification, and blow-up times for the one-dimensional pressureless
// Euler-Poisson models. The indicator Gamma(alpha, t) is the Jacobian of the
// characteristic flow map; its first positive zero marks the loss of
// smoothness, where the density rho0/Gamma and the velocity gradient
// Gamma_t/Gamma diverge.

#include <optional>
#include <string>
#include <variant>

#include "epcrit/profiles.hpp"
#include "epcrit/riccati.hpp"
#include "epcrit/verdict.hpp"

namespace epcrit {

// rho_t + (rho u)_x = 0, u_t + u u_x = k E with E_x = rho. The indicator
// solves Gamma'' = k rho0. Any sign of k is accepted (k > 0 repulsive,
// k < 0 attractive, k = 0 pure advection).
struct ZeroBackground {
    explicit ZeroBackground(double k);
    double k;
};

// E_x = rho - c with a constant neutralizing background c > 0; the indicator
// solves Gamma'' + c k Gamma = k rho0. Oscillatory for k > 0, exponential
// for k < 0.
struct ConstantBackground {
    ConstantBackground(double k, double c);
    double k, c;
};

// Adds friction -u/eps; underdamped branch eps > 1/(2 sqrt(ck)), k, c > 0.
// The indicator solves Gamma'' + Gamma'/eps + c k Gamma = k rho0.
struct RelaxationWeak {
    RelaxationWeak(double k, double c, double eps);
    double k, c, eps;
    double mu() const;  // oscillation rate sqrt(ck - 1/(4 eps^2))
};

// Overdamped branch eps < 1/(2 sqrt(ck)), k, c > 0.
struct RelaxationStrong {
    RelaxationStrong(double k, double c, double eps);
    double k, c, eps;
    double omega() const;  // real decay split sqrt(1/(4 eps^2) - ck)
};

using Model1D =
    std::variant<ZeroBackground, ConstantBackground, RelaxationWeak, RelaxationStrong>;

struct GammaPair {
    double gamma;    // Gamma(alpha, t)
    double gamma_t;  // time derivative
};

GammaPair gamma_1d(const Model1D& model, const InitialData& data, double alpha, double t);

struct CharacteristicState {
    double rho;  // rho0(alpha) / Gamma
    double u_x;  // Gamma_t / Gamma
};

// Throws BlowupError when Gamma(alpha, t) <= 0 (the state no longer exists).
CharacteristicState solution_along_characteristic(const Model1D& model,
                                                  const InitialData& data, double alpha,
                                                  double t);

// Signed distance of (rho0, u0')(alpha) to the model's critical surface;
// positive on the globally smooth side. For RelaxationStrong the surface is
// only a sufficient one, so a nonpositive margin means "undecided".
double margin_1d(const Model1D& model, const InitialData& data, double alpha);

// Sweep the threshold over the label grid (with golden-section refinement
// around the worst node). Sharp models return Global/Breakdown; the
// overdamped model returns GlobalSufficient/Indeterminate. Breakdown
// verdicts carry the earliest sampled blow-up time and its label.
Verdict verdict_1d(const Model1D& model, const InitialData& data, const AlphaGrid& alphas);

// Earliest positive zero of the closed-form Gamma(alpha, .). Errors if the
// configuration is globally smooth at this label.
double blowup_time_1d(const Model1D& model, const InitialData& data, double alpha);

// Qualitative evolution of the velocity gradient d(t) = Gamma_t/Gamma for
// the repulsive zero-background model, following the phase-plane cases:
//   1i:  d0 >= sqrt(k rho0)          monotone decay to zero
//   1ii: 0 < d0 < sqrt(k rho0)       rise to d_max at t_e_plus, then decay
//   2i:  -sqrt(k rho0) < d0 <= 0     zero crossing at t_zero, then as 1ii
//   2ii: -sqrt(2k rho0) < d0 <= -sqrt(k rho0)
//                                    dip to d_min at t_e_minus first
//   3:   d0 <= -sqrt(2k rho0)        breakdown at t_c_minus
struct RegimeClassification {
    std::string case_id;
    std::optional<double> d_max, d_min;
    std::optional<double> t_e_plus, t_e_minus, t_zero, t_c_minus;
};

RegimeClassification classify_regime(double d0, double rho0, double k);

// First interior minimum of the underdamped indicator, placed on the branch
// of the arctangent that the signs of u0' and u0' - 2 eps k (rho0 - c)
// dictate. quadrant is the branch index 1..4.
struct CriticalTimeWeak {
    double t_star;
    int quadrant;
    double mu;
};

CriticalTimeWeak critical_time_weak(const RelaxationWeak& model, const InitialData& data,
                                    double alpha);

}  // namespace epcrit
