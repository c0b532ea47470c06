#pragma once
// Command-line front end: sectioned key=value config files, flag overlay,
// label sweeps with a worker pool, CSV export, and the validate suite.

#include <cstdint>
#include <optional>
#include <string>

#include "epcrit/verdict.hpp"

namespace epcrit {

// Process exit codes.
inline constexpr int kExitGlobal = 0;         // Global / GlobalSufficient
inline constexpr int kExitConfigError = 1;    // bad flags, config, or expressions
inline constexpr int kExitBreakdown = 2;      // Breakdown / BreakdownSufficient
inline constexpr int kExitIndeterminate = 3;  // between the one-sided bounds
inline constexpr int kExitValidateFail = 4;   // validate suite had failures

struct RunConfig {
    // [model]
    std::string model;  // zero-bg | const-bg | relax-weak | relax-strong | viscous | radial
    double k = 1.0;
    std::optional<double> c;
    std::optional<double> eps;
    std::optional<int> nu;
    // [profiles]
    std::string rho0 = "1";
    std::string u0 = "0";
    // [grid]
    double alpha_min = 0.0;
    double alpha_max = 1.0;
    int alpha_count = 33;
    GridSpacing spacing = GridSpacing::Linear;
    double t_end = 10.0;
    int samples = 201;
    double domain_cut = 100.0;
    // [output]
    std::string out;  // CSV path; empty writes tables to stdout
    int jobs = 1;
    // validate controls (flags only)
    double scale = 1.0;
    std::uint64_t seed = 20260825;
    bool inject_gamma_sign_bug = false;

    AlphaGrid grid() const { return {alpha_min, alpha_max, alpha_count, spacing}; }
};

// Merges a sectioned key=value file ([model] [profiles] [grid] [output])
// into cfg. Unknown sections or keys are errors.
void apply_config_file(RunConfig& cfg, const std::string& path);

// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace epcrit
