// potential.cpp - closed-form potentials and assumption checks
#include "ch6/potential.hpp"

#include <cmath>

namespace ch6 {

namespace {

std::vector<double> differentiate(const std::vector<double>& c) {
    if (c.size() <= 1)
        return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i)
        d[i - 1] = static_cast<double>(i) * c[i];
    return d;
}

double horner(const std::vector<double>& c, double s) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;)
        v = v * s + c[i];
    return v;
}

} // namespace

Potential::Potential(PotentialKind kind, std::vector<double> coeffs, double lambda)
    : kind_(kind), lambda_(lambda) {
    c_[0] = std::move(coeffs);
    for (int d = 1; d < 5; ++d)
        c_[d] = differentiate(c_[d - 1]);
}

double Potential::eval(int deriv, double s) const { return horner(c_[deriv], s); }

Potential Potential::quartic(double lambda) {
    // F(s) = (s^2 - 1)^2 / 4 = 1/4 - s^2/2 + s^4/4
    return Potential(PotentialKind::quartic, {0.25, 0.0, -0.5, 0.0, 0.25}, lambda);
}

Potential Potential::linear_test() {
    return Potential(PotentialKind::linear_test, {0.0}, 0.0);
}

Potential Potential::polynomial(std::vector<double> coeffs, double lambda) {
    if (!(lambda >= 0.0))
        throw Error("potential: lambda must be >= 0");
    const std::size_t deg = coeffs.empty() ? 0 : coeffs.size() - 1;
    if (deg < 4)
        throw Error("polynomial potential: degree must be >= 4");
    if (deg % 2 != 0 || !(coeffs.back() > 0.0))
        throw Error("polynomial potential: needs even degree with positive leading coefficient");

    Potential pot(PotentialKind::polynomial, std::move(coeffs), lambda);
    // beta(0) = f(0), beta''(0) = f''(0): exact coefficient conditions
    if (pot.f(0.0) != 0.0)
        throw Error("polynomial potential: violates beta(0) = 0 (coefficient of s must vanish)");
    if (pot.f2(0.0) != 0.0)
        throw Error("polynomial potential: violates beta''(0) = 0 (coefficient of s^3 must vanish)");
    const int n = 2001;
    for (int i = 0; i < n; ++i) {
        const double s = -10.0 + 20.0 * i / (n - 1);
        if (pot.beta3(s) < 0.0)
            throw Error("polynomial potential: beta''' < 0 at s = " + std::to_string(s));
    }
    return pot;
}

double eval_gamma(const Potential& pot, double s) { return pot.beta(s) * pot.beta1(s); }

double eval_g(const Potential& pot, double nu, double s) {
    const double l = pot.lambda();
    return -l * s * pot.beta1(s) + (nu - l) * pot.beta(s) + (l * l - l * nu) * s;
}

ValidationReport validate_assumptions(const Potential& pot, double sample_radius, int samples) {
    if (!std::isfinite(sample_radius) || samples < 3)
        throw Error("validate_assumptions: bad sample interval");
    ValidationReport rep;
    rep.verification_only = pot.kind() == PotentialKind::linear_test;

    auto add = [&rep](std::string name, bool pass, double witness, std::string detail) {
        rep.checks.push_back({std::move(name), pass, witness, std::move(detail)});
    };

    add("beta(0) = 0", pot.beta(0.0) == 0.0, 0.0, "value " + std::to_string(pot.beta(0.0)));
    add("beta''(0) = 0", pot.beta2(0.0) == 0.0, 0.0, "value " + std::to_string(pot.beta2(0.0)));

    bool convex3 = true;
    double witness3 = 0.0;
    double cbeta = 0.0;
    double fmin = pot.F(-sample_radius);
    for (int i = 0; i < samples; ++i) {
        const double s = -sample_radius + 2.0 * sample_radius * i / (samples - 1);
        if (pot.beta3(s) < 0.0 && convex3) {
            convex3 = false;
            witness3 = s;
        }
        cbeta = std::max(cbeta, std::abs(pot.beta2(s)) / (std::abs(pot.beta1(s)) + 1.0));
        fmin = std::min(fmin, pot.F(s));
    }
    add("beta''' >= 0", convex3, witness3, convex3 ? "" : "negative at witness");

    // superlinearity proxy: beta'(S)/S must clearly dominate beta'(1)
    const double S = sample_radius;
    const double ratio = std::min(pot.beta1(S) / S, pot.beta1(-S) / S);
    const bool superlinear = ratio >= 2.0 * std::max(pot.beta1(1.0), 1e-12);
    add("beta' superlinear", superlinear, S,
        "beta'(S)/S = " + std::to_string(ratio) + ", beta'(1) = " + std::to_string(pot.beta1(1.0)));

    rep.fitted_c_beta = cbeta;
    add("|beta''| <= C_beta (|beta'| + 1)", std::isfinite(cbeta), 0.0,
        "fitted C_beta = " + std::to_string(cbeta));
    add("F bounded below", std::isfinite(fmin), 0.0, "min sampled F = " + std::to_string(fmin));

    rep.all_pass = true;
    for (const auto& c : rep.checks)
        rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

} // namespace ch6
