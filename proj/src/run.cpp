// run.cpp - subcommand drivers: solve, report, write outputs
#include "ch6/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ch6/field_io.hpp"
#include "ch6/sensitivity.hpp"

namespace ch6::run {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string() + " for writing");
        out << text;
    }
    fs::rename(tmp, path);
}

fs::path prepare_output(const RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_text(dir / "manifest.ini", cfg.manifest());
    return dir;
}

std::string snapshot_name(const char* stem, int index) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%06d.ch6f", stem, index);
    return buf;
}

void warn_if_understabilized(const StateTrajectory& traj, std::ostream& log) {
    double req = 0.0;
    for (const auto& d : traj.diagnostics())
        req = std::max(req, d.stab_requirement);
    if (traj.config().stab_a < req)
        log << "warning: stab_a = " << traj.config().stab_a
            << " is below max |f'(phi)| + |nu| = " << req
            << "; energy decay is not guaranteed\n";
}

} // namespace

std::string diagnostics_csv(const StateTrajectory& traj) {
    const EnergyIdentityResult ident = residual_energy_identity(traj);
    std::ostringstream out;
    out << "t,mean,energy,nodal_max,energy_identity_residual\n";
    for (std::size_t i = 0; i < traj.diagnostics().size(); ++i) {
        const auto& d = traj.diagnostics()[i];
        const double r = i == 0 ? 0.0 : ident.residuals[i - 1];
        out << num(d.time) << ',' << num(d.mean) << ',' << num(d.energy) << ','
            << num(d.nodal_max) << ',' << num(r) << '\n';
    }
    return out.str();
}

std::string iterations_csv(const OptimizeResult& result) {
    std::ostringstream out;
    out << "k,J,stationarity,step\n";
    for (std::size_t k = 0; k < result.j_history.size(); ++k)
        out << k << ',' << num(result.j_history[k]) << ','
            << num(result.stationarity_history[k]) << ',' << num(result.step_history[k])
            << '\n';
    return out.str();
}

int simulate_cmd(const RunConfig& cfg, std::ostream& log) {
    const Grid grid = cfg.make_grid();
    const ModelParams params = cfg.make_params();
    const StepperConfig stepper = cfg.make_stepper();
    const StateTrajectory traj =
        simulate(cfg.realize_phi0(grid), cfg.realize_control(grid), params, stepper, cfg.T);

    const fs::path dir = prepare_output(cfg);
    write_text(dir / "diagnostics.csv", diagnostics_csv(traj));
    for (int i = 0; i <= traj.steps(); ++i)
        if (i % cfg.snapshot_stride == 0 || i == traj.steps())
            write_field((dir / snapshot_name("phi", i)).string(), traj.phi(i));

    warn_if_understabilized(traj, log);
    log << "simulate: " << traj.steps() << " steps, final mean " << num(mean(traj.phi(traj.steps())))
        << ", final energy " << num(traj.diagnostics().back().energy) << "\n";
    log << "outputs in " << dir.string() << "\n";
    return 0;
}

int optimize_cmd(const RunConfig& cfg, std::ostream& log) {
    const Grid grid = cfg.make_grid();
    const ModelParams params = cfg.make_params();
    const StepperConfig stepper = cfg.make_stepper();
    const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
    const CostConfig cost_cfg = cfg.make_cost(grid, steps);
    cost_cfg.validate();
    const BoxConstraints box = cfg.make_box(grid);

    const OptimizeResult result =
        optimize(cfg.realize_phi0(grid), cfg.realize_control(grid), params, stepper, cfg.T,
                 cost_cfg, box, cfg.make_optimize());

    const fs::path dir = prepare_output(cfg);
    write_text(dir / "iterations.csv", iterations_csv(result));
    const int m = result.state.steps();
    for (int n = 0; n < m; ++n)
        if (n % cfg.snapshot_stride == 0 || n == m - 1)
            write_field((dir / snapshot_name("control", n)).string(), result.u_star.at(n));
    write_field((dir / "phi_final.ch6f").string(), result.state.phi(m));

    const char* reason = result.reason == Termination::stationarity ? "stationarity"
                         : result.reason == Termination::max_iters  ? "max_iters"
                                                                    : "step_collapse";
    log << "optimize: " << result.iterations << " iterations, J = " << num(result.j_history.back())
        << ", stationarity = " << num(result.stationarity_history.back()) << ", reason " << reason
        << "\n";
    log << "outputs in " << dir.string() << "\n";
    return 0;
}

int gradient_check_cmd(const RunConfig& cfg, int directions, double eps, std::ostream& log) {
    const Grid grid = cfg.make_grid();
    const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
    const CostConfig cost_cfg = cfg.make_cost(grid, steps);
    cost_cfg.validate();

    const GradientCheckResult res =
        gradient_check(cfg.realize_phi0(grid), cfg.realize_control(grid), cfg.make_params(),
                       cfg.make_stepper(), cfg.T, cost_cfg, directions, eps, cfg.check_seed);

    for (std::size_t d = 0; d < res.rel_errors.size(); ++d)
        log << "direction " << d << ": adjoint " << num(res.adjoint_derivatives[d]) << ", fd "
            << num(res.fd_derivatives[d]) << ", rel error " << num(res.rel_errors[d]) << "\n";
    log << "max rel error " << num(res.max_rel_error) << " (bound " << num(cfg.gradcheck_tol)
        << ")\n";
    return res.max_rel_error <= cfg.gradcheck_tol ? 0 : 1;
}

int taylor_check_cmd(const RunConfig& cfg, std::ostream& log) {
    const Grid grid = cfg.make_grid();
    const ControlSchedule h =
        ControlSchedule::constant(to_nodal(random_smooth_field(grid, 1.0, cfg.check_seed)));
    const std::vector<double> ratios =
        taylor_remainder_ratios(cfg.realize_phi0(grid), cfg.realize_control(grid), h,
                                cfg.taylor_eps, cfg.make_params(), cfg.make_stepper(), cfg.T);

    double max_ratio = 0.0, min_ratio = 1e300, max_r = 0.0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double r = ratios[i] * cfg.taylor_eps[i] * cfg.taylor_eps[i];
        log << "eps " << num(cfg.taylor_eps[i]) << ": remainder " << num(r) << ", ratio R/eps^2 "
            << num(ratios[i]) << "\n";
        max_ratio = std::max(max_ratio, ratios[i]);
        min_ratio = std::min(min_ratio, ratios[i]);
        max_r = std::max(max_r, r);
    }
    if (max_r <= 1e-9) {
        log << "remainders at roundoff level: map is affine to machine precision\n";
        return 0;
    }
    const double spread = max_ratio / std::max(min_ratio, 1e-300);
    log << "ratio spread " << num(spread) << " (bound 4)\n";
    return spread < 4.0 ? 0 : 1;
}

int diagnose_cmd(const RunConfig& cfg, std::ostream& log) {
    const Grid grid = cfg.make_grid();
    const ModelParams params = cfg.make_params();
    const StepperConfig stepper = cfg.make_stepper();
    const SpectralField phi0 = cfg.realize_phi0(grid);
    const ControlSchedule u = cfg.realize_control(grid);
    const StateTrajectory traj = simulate(phi0, u, params, stepper, cfg.T);

    // mass recursion: mode 0 is implicit Euler on the mean ODE
    double mass_err = 0.0;
    double m = mean(traj.phi(0));
    for (int n = 0; n < traj.steps(); ++n) {
        m = (m + cfg.dt * mean(u.at(n))) / (1.0 + cfg.dt * params.sigma);
        mass_err = std::max(mass_err, std::abs(m - traj.diagnostics()[n + 1].mean));
    }
    log << "mass recursion max deviation " << num(mass_err) << " (bound 1e-10)\n";

    const EnergyIdentityResult ident = residual_energy_identity(traj);
    log << "energy identity max residual " << num(ident.max_abs) << "\n";

    bool halving_ok = true;
    if (ident.max_abs > 1e-12) {
        RunConfig half = cfg;
        half.dt = cfg.dt / 2.0;
        const StateTrajectory traj2 =
            simulate(phi0, u, params, half.make_stepper(), cfg.T);
        const EnergyIdentityResult ident2 = residual_energy_identity(traj2);
        const double ratio = ident2.max_abs / ident.max_abs;
        log << "residual ratio at dt/2: " << num(ratio) << " (want <= 0.75)\n";
        halving_ok = ratio <= 0.75;
    }

    warn_if_understabilized(traj, log);
    return (mass_err <= 1e-10 && halving_ok) ? 0 : 1;
}

int validate_potential_cmd(const RunConfig& cfg, std::ostream& log) {
    const ModelParams params = cfg.make_params();
    const ValidationReport rep = validate_assumptions(params.potential);
    for (const auto& c : rep.checks)
        log << (c.pass ? "pass" : "FAIL") << "  " << c.name
            << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
    log << "fitted C_beta = " << num(rep.fitted_c_beta) << "\n";
    if (rep.verification_only)
        log << "note: linear-test potential is a verification-only mode\n";
    return rep.all_pass ? 0 : 1;
}

} // namespace ch6::run
