#include "epcrit/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epcrit {

double AlphaGrid::node(int i) const {
    if (count <= 1) return alpha_min;
    const double s = static_cast<double>(i) / static_cast<double>(count - 1);
    if (spacing == GridSpacing::Linear) return alpha_min + (alpha_max - alpha_min) * s;
    if (!(alpha_min > 0.0))
        throw std::invalid_argument("log-spaced grids need alpha_min > 0");
    return alpha_min * std::pow(alpha_max / alpha_min, s);
}

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Global: return "Global";
        case VerdictKind::Breakdown: return "Breakdown";
        case VerdictKind::GlobalSufficient: return "GlobalSufficient";
        case VerdictKind::BreakdownSufficient: return "BreakdownSufficient";
        case VerdictKind::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

double minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                       double rel_tol) {
    static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    double span_tol = rel_tol * (std::abs(lo) + std::abs(hi) + 1.0);
    while (b - a > span_tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

std::pair<double, double> grid_minimize(const std::function<double(double)>& f,
                                        const AlphaGrid& grid) {
    int best = 0;
    double best_val = f(grid.node(0));
    for (int i = 1; i < grid.count; ++i) {
        double v = f(grid.node(i));
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    if (grid.count <= 1) return {grid.node(0), best_val};

    double lo = grid.node(std::max(0, best - 1));
    double hi = grid.node(std::min(grid.count - 1, best + 1));
    double arg = minimize_scalar(f, lo, hi);
    double val = f(arg);
    if (best_val < val) return {grid.node(best), best_val};
    return {arg, val};
}

}  // namespace epcrit
