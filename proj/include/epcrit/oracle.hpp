#pragma once
// Numerical engines shared by the whole library: bracketed root finding,
// adaptive Gauss-Kronrod quadrature, and an embedded Runge-Kutta integrator
// with dense output and event location. These are the reference ("oracle")
// tools every closed form in the library is cross-checked against, so they
// deliberately know nothing about the physics modules built on top of them.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace epcrit {

// Thrown when an engine cannot meet its accuracy contract (quadrature budget
// exhausted, bracket invalid, integrator stalled, ...).
class NumericsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ============================================================================
// Bracketed root finding
// ============================================================================

struct RootOptions {
    double rel_tol = 1e-12;   // relative half-width of the final bracket
    double abs_tol = 0.0;     // absolute floor added on top of rel_tol*|x|
    int max_iter = 200;
};

// Brent-style safeguarded bisection/secant/inverse-quadratic search.
// Requires a strict sign change: f(lo)*f(hi) < 0. A zero at either endpoint
// is rejected as a degenerate bracket rather than silently returned.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& opts = {});

// ============================================================================
// Adaptive quadrature (Gauss-Kronrod 7/15 with interval bisection)
// ============================================================================

enum class GradedEnd { None, Lower, Upper };

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_intervals = 4000;
    // Apply a square-root substitution toward one endpoint. Use for
    // integrable endpoint singularities or integrands that vary over many
    // orders of magnitude there; the singular point itself is never
    // evaluated, and a sample rounding onto it counts as zero.
    GradedEnd graded = GradedEnd::None;
};

double quad(const std::function<double(double)>& f, double a, double b,
            const QuadOptions& opts = {});

// ============================================================================
// Initial value problems: Dormand-Prince 5(4) with dense output and events
// ============================================================================

using Rhs = std::function<void(double t, const std::vector<double>& y,
                               std::vector<double>& dydt)>;
using EventFn = std::function<double(double t, const std::vector<double>& y)>;

struct Event {
    EventFn g;          // event fires where g changes sign along the solution
    bool halt = true;   // stop at the located crossing vs. record and continue
};

struct IvpSpec {
    Rhs rhs;
    std::vector<double> y0;
    double t0 = 0.0;
    double t1 = 1.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;        // 0 = unlimited
    double blowup_norm = 1e12;    // halt once |y|_inf exceeds this
    std::vector<Event> events;
};

enum class IvpStatus {
    Done,           // reached t1
    EventHalt,      // a halting event fired
    Blowup,         // |y|_inf crossed blowup_norm; bracket in blowup_lo/hi
    StepUnderflow,  // step size collapsed (singular approach); partial result
};

struct EventRecord {
    int index;      // which entry of IvpSpec::events
    double t;
    std::vector<double> y;
};

class Trajectory {
public:
    IvpStatus status = IvpStatus::Done;
    std::vector<EventRecord> events;
    // Blow-up bracket: the solution norm was below blowup_norm at blowup_lo
    // and above it at blowup_hi. Only meaningful when status == Blowup.
    double blowup_lo = 0.0, blowup_hi = 0.0;

    double t_begin() const { return t_begin_; }
    double t_end() const { return t_end_; }
    const std::vector<double>& final_state() const { return y_end_; }

    // Dense evaluation anywhere in [t_begin, t_end] via the stored
    // step-local quartic interpolants.
    std::vector<double> eval(double t) const;
    double eval_component(double t, int i) const;

    // Accepted step nodes (t_begin first, t_end last).
    const std::vector<double>& nodes() const { return nodes_; }

private:
    friend Trajectory integrate(const IvpSpec&);
    struct DenseStep {
        double t, h;                 // interval [t, t+h]
        std::vector<double> rcont;   // 5*n interpolation coefficients
    };
    int dim_ = 0;
    double t_begin_ = 0.0, t_end_ = 0.0;
    std::vector<double> y_end_;
    std::vector<double> nodes_;
    std::vector<DenseStep> steps_;
    const DenseStep& locate(double t) const;
};

Trajectory integrate(const IvpSpec& spec);

}  // namespace epcrit
