#pragma once
// Scalar Riccati equation w' = a(t)w + b(t)w^2 along characteristics.
// The solution has the closed form
//     w(t) = w0 exp(I_a(t)) / (1 - w0 I_B(t)),
//     I_a = integral_0^t a,   I_B = integral_0^t b exp(I_a),
// and is global on [0, T] exactly when w0 I_B stays below 1 there.

#include <array>
#include <functional>
#include <optional>

#include "epcrit/oracle.hpp"

namespace epcrit {

// Requested evaluation at or past a finite-time blow-up. Carries a bracket of
// the blow-up time: the quantity of interest was still finite at t_lo and
// gone at t_hi.
class BlowupError : public NumericsError {
public:
    BlowupError(const std::string& what, double lo, double hi)
        : NumericsError(what), t_lo(lo), t_hi(hi) {}
    double t_lo, t_hi;
};

struct RiccatiProblem {
    std::function<double(double)> a;
    std::function<double(double)> b;
    double w0 = 0.0;
};

// w(t). Throws BlowupError if the denominator 1 - w0 I_B vanishes on (0, t].
double riccati_solution(const RiccatiProblem& p, double t);

// Detail result of sweeping the denominator over [0, horizon].
struct RiccatiScan {
    bool global = true;
    double sup_integral = 0.0;  // max of w0 * I_B over the horizon
    double t_at_sup = 0.0;
    // Bracket of the first time w0 * I_B reaches 1, when that happens.
    std::optional<std::array<double, 2>> blowup_bracket;
};

RiccatiScan riccati_scan(const RiccatiProblem& p, double horizon);

// True iff w0 * I_B < 1 throughout [0, horizon].
bool riccati_global(const RiccatiProblem& p, double horizon);

}  // namespace epcrit
