// acceptance.cpp - one pass/fail line per acceptance criterion
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "ch6/control.hpp"
#include "ch6/sensitivity.hpp"

using namespace ch6;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    if (!pass)
        ++failures;
}

Grid make1d(int n, double len = 1.0) {
    const double lengths[] = {len};
    const int modes[] = {n};
    return Grid::make(1, lengths, modes);
}

SpectralField constant_field(const Grid& g, double v) {
    SpectralField f(g);
    f[0] = v * std::sqrt(g.volume());
    return f;
}

SpectralField cos_mode(const Grid& g, int k, double amp = 1.0) {
    SpectralField f(g);
    f[static_cast<std::size_t>(k)] = amp * std::sqrt(g.length(0) / 2.0);
    return f;
}

ModelParams params_of(Potential pot, double sigma, double nu) {
    ModelParams p;
    p.sigma = sigma;
    p.nu = nu;
    p.potential = std::move(pot);
    return p;
}

// random field with exponentially decaying spectrum (resolved dynamics)
SpectralField resolved_random(const Grid& g, double amp, std::uint64_t seed) {
    SpectralField f = random_smooth_field(g, amp, seed);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const auto multi = g.unflatten(k);
        int sum = 0;
        for (int a = 0; a < g.dim(); ++a)
            sum += multi[a];
        const double w = 1.0 + g.eigenvalue(k);
        f[k] *= w * w * std::exp(-0.7 * sum) * (sum <= 10 ? 1.0 : 0.0);
    }
    return f;
}

char buf[256];

// 1. discrete mean recursion and the closed-form mean ODE solution
void criterion_mean_ode() {
    Grid g = make1d(32);
    ModelParams q = params_of(Potential::quartic(), 1.0, 0.0);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    StateTrajectory traj =
        simulate(constant_field(g, 0.5), ControlSchedule::zero(g), q, cfg, 1.0);

    double recursion_err = 0.0, closed_err = 0.0;
    double m = 0.5;
    for (int n = 1; n <= traj.steps(); ++n) {
        m /= 1.0 + cfg.dt; // 0.5 / (1 + dt)^n
        recursion_err = std::max(recursion_err, std::abs(mean(traj.phi(n)) - m));
        closed_err =
            std::max(closed_err, std::abs(mean(traj.phi(n)) - 0.5 * std::exp(-traj.time(n))));
    }
    std::snprintf(buf, sizeof buf, "recursion err %.2e <= 1e-12, closed-form err %.2e <= 2e-3",
                  recursion_err, closed_err);
    report(1, "mean-value ODE", recursion_err <= 1e-12 && closed_err <= 2e-3, buf);
}

// 2. linear-test single mode against exp(-pi^6 t), observed order in [0.9, 1.1]
void criterion_single_mode() {
    Grid g = make1d(32);
    ModelParams lt = params_of(Potential::linear_test(), 0.0, 0.0);
    const double T = 1e-3;
    const double exact = std::exp(-std::pow(kPi, 6.0) * T);

    std::vector<double> errs;
    for (double dt : {1e-4, 5e-5, 2.5e-5}) {
        StepperConfig cfg;
        cfg.dt = dt;
        cfg.stab_a = 0.0;
        cfg.stab_b = 0.0;
        StateTrajectory traj = simulate(cos_mode(g, 1), ControlSchedule::zero(g), lt, cfg, T);
        errs.push_back(std::abs(traj.phi(traj.steps())[1] - exact * cos_mode(g, 1)[1]));
    }
    bool pass = true;
    double omin = 1e300, omax = 0.0;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        const double order = std::log2(errs[i] / errs[i + 1]);
        omin = std::min(omin, order);
        omax = std::max(omax, order);
        pass = pass && order >= 0.9 && order <= 1.1;
    }
    std::snprintf(buf, sizeof buf, "observed orders in [%.3f, %.3f], want [0.9, 1.1]", omin, omax);
    report(2, "single-mode temporal order", pass, buf);
}

// 3. energy nonincreasing with adequate stabilization; residual halves with dt
void criterion_energy_dissipation() {
    Grid g = make1d(32, 10.0);
    ModelParams q = params_of(Potential::quartic(), 0.0, 0.0); // test-mode sigma = 0
    SpectralField phi0 = resolved_random(g, 1.0, 33);
    phi0 *= 0.9 / norm(phi0, NormKind::Linf); // |phi0| <= 1

    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.stab_a = 4.0;
    cfg.stab_b = 2.0;
    StateTrajectory traj = simulate(phi0, ControlSchedule::zero(g), q, cfg, 0.1);

    double required = 0.0, worst_rise = -1e300;
    for (std::size_t i = 0; i < traj.diagnostics().size(); ++i) {
        required = std::max(required, traj.diagnostics()[i].stab_requirement);
        if (i > 0)
            worst_rise = std::max(worst_rise, traj.diagnostics()[i].energy -
                                                  traj.diagnostics()[i - 1].energy);
    }
    const bool adequate = cfg.stab_a >= required;

    EnergyIdentityResult res = residual_energy_identity(traj);
    StepperConfig half = cfg;
    half.dt = cfg.dt / 2.0;
    EnergyIdentityResult res2 =
        residual_energy_identity(simulate(phi0, ControlSchedule::zero(g), q, half, 0.1));
    const double ratio = res2.max_abs / res.max_abs;

    std::snprintf(buf, sizeof buf,
                  "max energy rise %.2e <= 1e-10 (A=%.1f >= %.2f), residual ratio %.2f in [0.3,0.7]",
                  worst_rise, cfg.stab_a, required, ratio);
    report(3, "energy dissipation", adequate && worst_rise <= 1e-10 && ratio >= 0.3 && ratio <= 0.7,
           buf);
}

// 4. inverse Neumann operator identities over 20 random zero-mean fields
void criterion_operator_n() {
    double worst_round = 0.0, worst_symm = 0.0, worst_vstar = 0.0;
    auto run = [&](const Grid& g, std::uint64_t seed) {
        SpectralField zeta = random_smooth_field(g, 1.0, seed);
        SpectralField xi = random_smooth_field(g, 1.0, seed + 1000);
        zeta[0] = 0.0;
        xi[0] = 0.0;

        SpectralField round = laplacian(neumann_inverse(zeta));
        round *= -1.0;
        round -= zeta;
        worst_round = std::max(worst_round, norm(round, NormKind::H) / norm(zeta, NormKind::H));

        const double lhs = inner_h(to_nodal(zeta), to_nodal(neumann_inverse(xi)));
        const double rhs = inner_h(to_nodal(xi), to_nodal(neumann_inverse(zeta)));
        worst_symm =
            std::max(worst_symm, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0}));

        const double self = inner_h(to_nodal(zeta), to_nodal(neumann_inverse(zeta)));
        const double vs = norm(zeta, NormKind::Vstar);
        worst_vstar = std::max(worst_vstar, std::abs(self - vs * vs) / std::max(vs * vs, 1.0));
    };
    Grid g1 = make1d(32);
    const double lengths2[] = {1.0, 1.0};
    const int modes2[] = {32, 32};
    Grid g2 = Grid::make(2, lengths2, modes2);
    for (std::uint64_t s = 0; s < 10; ++s) {
        run(g1, 100 + s);
        run(g2, 200 + s);
    }
    std::snprintf(buf, sizeof buf, "roundtrip %.2e, symmetry %.2e, Vstar %.2e, all <= 1e-12",
                  worst_round, worst_symm, worst_vstar);
    report(4, "inverse Neumann operator", worst_round <= 1e-12 && worst_symm <= 1e-12 &&
                                              worst_vstar <= 1e-12, buf);
}

// 5. adjoint gradient against central differences, error shrinking with dt
void criterion_gradient() {
    Grid g = make1d(32, 10.0);
    ModelParams q = params_of(Potential::quartic(), 1.0, 0.5);
    CostConfig cc;
    cc.alpha1 = 1.0;
    cc.alpha3 = 1e-2;
    cc.phi_Q = TargetSchedule::constant(constant_field(g, 0.1));
    SpectralField phi0 = resolved_random(g, 0.4, 4);
    ControlSchedule u = ControlSchedule::constant(to_nodal(resolved_random(g, 0.3, 3)));

    auto max_err = [&](double dt) {
        StepperConfig cfg;
        cfg.dt = dt;
        return gradient_check(phi0, u, q, cfg, 0.1, cc, 5, 1e-3, 99).max_rel_error;
    };
    const double e1 = max_err(1e-3);
    const double e2 = max_err(5e-4);
    // below ~1e-6 the oracle's own truncation dominates and "decreases with
    // dt" carries no signal
    const bool decreases = e2 < e1 || std::max(e1, e2) <= 1e-6;
    std::snprintf(buf, sizeof buf, "rel err %.2e <= 1e-2 at dt=1e-3, %.2e at dt/2", e1, e2);
    report(5, "adjoint gradient vs finite differences", e1 <= 1e-2 && decreases, buf);
}

// 6. quadratic remainder ratios bounded; affine map for linear-test
void criterion_taylor() {
    Grid g = make1d(24, 10.0);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    const double T = 0.05;
    const double eps_list[] = {1e-1, 3e-2, 1e-2};
    SpectralField phi0 = resolved_random(g, 0.5, 12);
    ControlSchedule u = ControlSchedule::zero(g);
    ControlSchedule h = ControlSchedule::constant(to_nodal(resolved_random(g, 1.0, 13)));

    ModelParams q = params_of(Potential::quartic(), 1.0, 0.5);
    std::vector<double> ratios = taylor_remainder_ratios(phi0, u, h, eps_list, q, cfg, T);
    double rmin = 1e300, rmax = 0.0;
    for (double r : ratios) {
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    const double spread = rmax / rmin;

    ModelParams lt = params_of(Potential::linear_test(), 1.0, 0.5);
    std::vector<double> lt_ratios = taylor_remainder_ratios(phi0, u, h, eps_list, lt, cfg, T);
    double worst_affine = 0.0;
    for (std::size_t i = 0; i < lt_ratios.size(); ++i)
        worst_affine = std::max(worst_affine, lt_ratios[i] * eps_list[i] * eps_list[i]);

    std::snprintf(buf, sizeof buf, "ratio spread %.2f < 4, linear-test remainder %.2e <= 1e-9",
                  spread, worst_affine);
    report(6, "Frechet remainder", spread < 4.0 && worst_affine <= 1e-9, buf);
}

// 7. duality identity between the linearized and adjoint solutions
void criterion_duality() {
    auto gap_of = [](double dt) {
        Grid g = make1d(32, 10.0);
        ModelParams q = params_of(Potential::quartic(), 1.0, 0.5);
        StepperConfig cfg;
        cfg.dt = dt;
        const double T = 0.1;
        SpectralField phi0 = resolved_random(g, 0.5, 4);
        StateTrajectory state = simulate(phi0, ControlSchedule::zero(g), q, cfg, T);
        const int m = state.steps();

        CostConfig cc;
        cc.alpha1 = 1.0;
        cc.alpha2 = 1.0;
        cc.phi_Q = TargetSchedule::constant(constant_field(g, 0.1));
        cc.phi_Omega = constant_field(g, -0.2);
        AdjTrajectory adj = solve_adjoint(state, cc);
        const GridField h = to_nodal(resolved_random(g, 0.8, 5));
        LinTrajectory lin = solve_linearized(state, ControlSchedule::constant(h));

        double lhs = 0.0;
        for (int n = 0; n < m; ++n) {
            SpectralField rho1 = state.phi(n);
            rho1 -= cc.phi_Q.at(n);
            lhs += dt * inner_h(rho1, lin.psi[static_cast<std::size_t>(n)]);
        }
        SpectralField rho2 = state.phi(m);
        rho2 -= *cc.phi_Omega;
        lhs += inner_h(rho2, lin.psi[static_cast<std::size_t>(m)]);

        double rhs = 0.0;
        const SpectralField h_hat = to_spectral(h);
        for (int n = 0; n < m; ++n)
            rhs += dt * inner_h(h_hat, adj.p[static_cast<std::size_t>(n)]);
        return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs));
    };
    const double r1 = gap_of(1e-3);
    const double r2 = gap_of(5e-4);
    std::snprintf(buf, sizeof buf, "relative gap %.2e <= 1e-3 at dt=1e-3, ratio %.2f in [0.3,0.7]",
                  r1, r2 / r1);
    report(7, "duality identity", r1 <= 1e-3 && r2 / r1 >= 0.3 && r2 / r1 <= 0.7, buf);
}

// 8. projected gradient on a self-generated target
void criterion_optimize() {
    Grid g = make1d(16, 10.0);
    ModelParams q = params_of(Potential::quartic(), 1.0, 0.5);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    const double T = 0.05;
    SpectralField phi0 = resolved_random(g, 0.4, 7);

    GridField u_dagger = sample(g, [&](std::span<const double> x) {
        return 0.3 * std::cos(kPi * x[0] / g.length(0));
    });
    StateTrajectory ref = simulate(phi0, ControlSchedule::constant(u_dagger), q, cfg, T);

    CostConfig cc;
    cc.alpha1 = 1.0;
    cc.alpha3 = 1e-3;
    std::vector<SpectralField> targets;
    for (int n = 0; n < ref.steps(); ++n)
        targets.push_back(ref.phi(n));
    cc.phi_Q = TargetSchedule::per_step(std::move(targets));

    BoxConstraints box(-1.0, 1.0);
    OptimizeOptions opts;
    opts.max_iters = 400;
    opts.step0 = 10.0;
    opts.tol = 1e-4;
    bool feasible = true;
    opts.on_iterate = [&](int, const ControlSchedule& uu) {
        for (int n = 0; n < uu.steps(); ++n)
            for (double v : uu.at(n).values())
                feasible = feasible && v >= -1.0 && v <= 1.0;
    };

    OptimizeResult res = optimize(phi0, ControlSchedule::zero(g), q, cfg, T, cc, box, opts);

    bool descending = true;
    for (std::size_t k = 1; k < res.j_history.size(); ++k)
        descending = descending && res.j_history[k] < res.j_history[k - 1];

    const int m = res.state.steps();
    double fp2 = 0.0;
    for (int n = 0; n < m; ++n) {
        GridField cand = to_nodal(res.adjoint.p[static_cast<std::size_t>(n)]);
        cand *= -1.0 / cc.alpha3;
        GridField d = res.u_star.at(n);
        d -= box.clamp(cand, n);
        fp2 += cfg.dt * inner_h(d, d);
    }
    const double fixed_point = std::sqrt(fp2);
    const double stat = res.stationarity_history.back();

    std::snprintf(buf, sizeof buf,
                  "J strictly decreasing over %zu iterates, stat %.2e <= 1e-4, "
                  "fixed-point %.2e <= %.2e, feasible %s",
                  res.j_history.size(), stat, fixed_point, 1.01 * opts.tol / cc.alpha3,
                  feasible ? "yes" : "no");
    report(8, "tracking optimization",
           descending && stat <= opts.tol && fixed_point <= 1.01 * opts.tol / cc.alpha3 &&
               feasible && res.reason == Termination::stationarity,
           buf);
}

// 9. continuous dependence ratio stable across perturbation scales
void criterion_continuous_dependence() {
    Grid g = make1d(32);
    ModelParams q = params_of(Potential::quartic(), 1.0, 0.5);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    const double T = 0.05;
    SpectralField phi0 = 0.5 * random_smooth_field(g, 1.0, 8);
    const GridField dir = to_nodal(random_smooth_field(g, 1.0, 9));
    StateTrajectory base = simulate(phi0, ControlSchedule::zero(g), q, cfg, T);

    double lo = 1e300, hi = 0.0;
    for (double scale : {1e-1, 1e-2, 1e-3}) {
        GridField u(g);
        axpy(scale, dir, u);
        StateTrajectory pert = simulate(phi0, ControlSchedule::constant(u), q, cfg, T);
        double c0h = 0.0;
        for (int i = 0; i <= base.steps(); ++i) {
            SpectralField d = pert.phi(i);
            d -= base.phi(i);
            c0h = std::max(c0h, norm(d, NormKind::H));
        }
        const double du = std::sqrt(T) * norm(to_spectral(u), NormKind::Vstar);
        const double ratio = c0h / du;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    std::snprintf(buf, sizeof buf, "ratio range [%.3e, %.3e], spread %.2f < 2", lo, hi, hi / lo);
    report(9, "continuous dependence", hi / lo < 2.0, buf);
}

// 10. doubling the mode count moves phi(T) by <= 1e-8
void criterion_spectral_convergence() {
    ModelParams q = params_of(Potential::quartic(), 1.0, 1.0);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    auto run = [&](int n) {
        Grid g = make1d(n);
        SpectralField phi0 = cos_mode(g, 1, 0.2);
        axpy(1.0, cos_mode(g, 2, 0.1), phi0);
        axpy(1.0, constant_field(g, 0.3), phi0);
        return simulate(phi0, ControlSchedule::zero(g), q, cfg, 0.05);
    };
    StateTrajectory a = run(32);
    StateTrajectory b = run(64);
    double diff2 = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double ca = k < 32 ? a.phi(a.steps())[static_cast<std::size_t>(k)] : 0.0;
        const double cb = b.phi(b.steps())[static_cast<std::size_t>(k)];
        diff2 += (ca - cb) * (ca - cb);
    }
    const double diff = std::sqrt(diff2);
    std::snprintf(buf, sizeof buf, "H-norm gap %.2e <= 1e-8 for N = 32 -> 64", diff);
    report(10, "spatial spectral convergence", diff <= 1e-8, buf);
}

} // namespace

int main() {
    criterion_mean_ode();
    criterion_single_mode();
    criterion_energy_dissipation();
    criterion_operator_n();
    criterion_gradient();
    criterion_taylor();
    criterion_duality();
    criterion_optimize();
    criterion_continuous_dependence();
    criterion_spectral_convergence();
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
