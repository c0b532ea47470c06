#include "epcrit/profiles.hpp"

#include <cmath>

namespace epcrit {

ScalarProfile::ScalarProfile(const std::string& text, Domain domain)
    : ast_(parse_expression(text)),
      dast_(differentiate(ast_)),
      domain_(domain),
      source_(text) {}

void ScalarProfile::check(double x) const {
    if (!ast_) throw DomainError("profile not initialized");
    if (domain_ == Domain::HalfLine && x < 0.0)
        throw DomainError("half-line profile evaluated at x = " + std::to_string(x));
}

double ScalarProfile::eval(double x) const {
    check(x);
    const double v = eval_expr(*ast_, x);
    if (!std::isfinite(v))
        throw DomainError("profile value non-finite at x = " + std::to_string(x));
    return v;
}

double ScalarProfile::deriv(double x) const {
    check(x);
    const double v = eval_expr(*dast_, x);
    if (!std::isfinite(v))
        throw DomainError("profile derivative non-finite at x = " + std::to_string(x));
    return v;
}

double weighted_mass(const ScalarProfile& n0, int nu, double alpha) {
    if (alpha < 0.0) throw DomainError("weighted_mass requires alpha >= 0");
    if (alpha == 0.0) return 0.0;
    auto integrand = [&](double xi) {
        const double n = n0.eval(xi);
        if (n < 0.0)
            throw DomainError("density profile negative at x = " + std::to_string(xi));
        return n * std::pow(xi, nu);
    };
    QuadOptions q;
    q.rel_tol = 1e-10;
    q.abs_tol = 1e-14;
    return quad(integrand, 0.0, alpha, q);
}

double weighted_field(const ScalarProfile& n0, int nu, double alpha) {
    if (alpha == 0.0) return 0.0;
    return weighted_mass(n0, nu, alpha) / std::pow(alpha, nu);
}

}  // namespace epcrit
