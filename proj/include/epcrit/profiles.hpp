#pragma once
// Initial-data profiles: parsed expressions with exact derivatives, plus the
// weighted masses e0(a) = integral_0^a n0(s) s^nu ds and E0 = e0 / a^nu that
// every radial threshold consumes.

#include <string>

#include "epcrit/expression.hpp"
#include "epcrit/oracle.hpp"

namespace epcrit {

enum class Domain { FullLine, HalfLine };

class ScalarProfile {
public:
    ScalarProfile() = default;
    ScalarProfile(const std::string& text, Domain domain = Domain::FullLine);

    // Evaluation outside the declared domain (x < 0 on the half line) and any
    // non-finite result raise DomainError.
    double eval(double x) const;
    double deriv(double x) const;

    Domain domain() const { return domain_; }
    const std::string& source() const { return source_; }
    std::string printed() const { return to_string(ast_); }
    std::string printed_derivative() const { return to_string(dast_); }

private:
    void check(double x) const;
    ExprPtr ast_, dast_;
    Domain domain_ = Domain::FullLine;
    std::string source_;
};

struct InitialData {
    ScalarProfile rho0;  // density profile (n0 for the radial models)
    ScalarProfile u0;    // velocity profile
};

// e0(alpha) with the quadrature tolerances the thresholds rely on
// (rel 1e-10, abs 1e-14). Negative n0 anywhere in [0, alpha] is rejected.
double weighted_mass(const ScalarProfile& n0, int nu, double alpha);

// E0(alpha) = alpha^{-nu} e0(alpha); continuously extended by 0 at alpha = 0.
double weighted_field(const ScalarProfile& n0, int nu, double alpha);

}  // namespace epcrit
