#pragma once
// Shared result types for the critical-threshold classifiers.

#include <functional>
#include <optional>
#include <string>

namespace epcrit {

enum class VerdictKind {
    Global,               // smooth for all time (sharp criterion)
    Breakdown,            // finite-time gradient blow-up (sharp criterion)
    GlobalSufficient,     // smooth for all time (one-sided criterion)
    BreakdownSufficient,  // blow-up guaranteed (one-sided criterion)
    Indeterminate,        // between the one-sided bounds
};

std::string to_string(VerdictKind kind);

struct Verdict {
    VerdictKind kind = VerdictKind::Indeterminate;
    // Earliest breakdown time over the sampled labels, when one exists.
    std::optional<double> t_c;
    // Label attaining the worst margin (or the earliest breakdown).
    std::optional<double> witness_alpha;
    // Signed distance to the critical surface; positive on the global side.
    double margin = 0.0;
};

enum class GridSpacing { Linear, Log };

// Sampling grid for characteristic labels, linearly or geometrically spaced.
struct AlphaGrid {
    double alpha_min = 0.0;
    double alpha_max = 1.0;
    int count = 129;
    GridSpacing spacing = GridSpacing::Linear;

    double node(int i) const;
};

// Golden-section minimizer on [lo, hi]; f need not be differentiable.
double minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                       double rel_tol = 1e-10);

// Scan the grid for the smallest f value and polish around the best node.
// Returns (argmin, min).
std::pair<double, double> grid_minimize(const std::function<double(double)>& f,
                                        const AlphaGrid& grid);

}  // namespace epcrit
