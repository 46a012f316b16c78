// potential.hpp - double-well potential, convex split and derived functions
#pragma once

#include <string>
#include <vector>

#include "ch6/errors.hpp"

namespace ch6 {

enum class PotentialKind { quartic, polynomial, linear_test };

// Double-well potential F with derivatives through order four and the convex
// split F(s) = beta_hat(s) - (lambda/2) s^2, so beta = f + lambda*id. The
// quartic prototype is F(s) = (s^2-1)^2/4 with lambda = 1, giving
// beta(s) = s^3. linear_test has f == 0; it exists only to enable exact
// single-mode decay oracles and fails the superlinearity assumption on
// purpose.
class Potential {
public:
    static Potential quartic(double lambda = 1.0);
    // coeffs are the coefficients of F in ascending powers; degree >= 4,
    // even, with positive leading coefficient. Rejects splits violating
    // beta(0) = 0, beta''(0) = 0 or beta''' >= 0 on [-10, 10].
    static Potential polynomial(std::vector<double> coeffs, double lambda);
    static Potential linear_test();

    PotentialKind kind() const { return kind_; }
    double lambda() const { return lambda_; }
    const std::vector<double>& coefficients() const { return c_[0]; }

    double F(double s) const { return eval(0, s); }
    double f(double s) const { return eval(1, s); }  // F'
    double f1(double s) const { return eval(2, s); } // f'
    double f2(double s) const { return eval(3, s); } // f''
    double f3(double s) const { return eval(4, s); } // f'''

    double beta(double s) const { return f(s) + lambda_ * s; }
    double beta1(double s) const { return f1(s) + lambda_; }
    double beta2(double s) const { return f2(s); }
    double beta3(double s) const { return f3(s); }

private:
    Potential(PotentialKind kind, std::vector<double> coeffs, double lambda);
    double eval(int deriv, double s) const;

    PotentialKind kind_ = PotentialKind::quartic;
    double lambda_ = 1.0;
    std::vector<double> c_[5]; // coefficients of F, F', ..., F''''
};

// gamma = beta * beta'
double eval_gamma(const Potential& pot, double s);

// g(s) = -lambda s beta'(s) + (nu - lambda) beta(s) + (lambda^2 - lambda nu) s
double eval_g(const Potential& pot, double nu, double s);

struct AssumptionCheck {
    std::string name;
    bool pass = false;
    double witness = 0.0; // sample point where the check failed (if it did)
    std::string detail;
};

struct ValidationReport {
    std::vector<AssumptionCheck> checks;
    double fitted_c_beta = 0.0; // max |beta''| / (|beta'| + 1) over the samples
    bool all_pass = false;
    bool verification_only = false; // linear_test: exact oracles only
};

// Sampled check of the structural assumptions on beta: beta(0) = 0,
// beta''(0) = 0, beta''' >= 0, superlinear growth of beta', and the growth
// bound |beta''| <= C_beta (|beta'| + 1) with the fitted constant reported.
ValidationReport validate_assumptions(const Potential& pot, double sample_radius = 10.0,
                                      int samples = 2001);

struct ModelParams {
    double sigma = 1.0; // reaction rate; sigma = 0 is a test-mode deviation
    double nu = 0.0;    // Ginzburg-Landau weight (negative: functionalized CH)
    Potential potential = Potential::quartic();

    void validate() const {
        if (!(sigma >= 0.0))
            throw Error("sigma must be >= 0");
    }
};

} // namespace ch6
