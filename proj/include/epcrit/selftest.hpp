#pragma once
// Closed-form-vs-oracle validation families. Each family draws randomized
// configurations, evaluates the closed forms, and cross-checks them against
// the independent ODE/quadrature engines. The CLI validate command runs the
// full set; the acceptance test binary runs them one per criterion.

#include <cstdint>
#include <string>
#include <vector>

namespace epcrit {

struct ValidationOptions {
    // Fraction of the full sample counts (floor 1 per family). 1.0 is the
    // acceptance load; smaller values give a quick desk check.
    double scale = 1.0;
    std::uint64_t seed = 20260825;
    // Mutation smoke hook: feeds a sign-flipped indicator formula to the
    // oracle-equivalence family, which must then fail. Never touches the
    // library itself.
    bool inject_gamma_sign_bug = false;
};

struct FamilyResult {
    std::string name;
    bool pass = false;
    std::string detail;        // one-line outcome summary
    std::string worst_config;  // re-runnable CLI flags for the worst sample, if any
    double seconds = 0.0;
};

// Runs every family in a fixed order; deterministic for fixed options.
std::vector<FamilyResult> run_validation(const ValidationOptions& opts = {});

}  // namespace epcrit
