// state.cpp - IMEX stepping of the reformulated single equation
#include "ch6/state.hpp"

#include <cmath>
#include <string>

namespace ch6 {

namespace {

// Nonlinear remainder of the chemical potential,
//   NL(phi) = -Lap f(phi) + (f'(phi) + nu) w(phi),
// so that mu = Lap^2 phi + NL(phi). Products are evaluated nodally.
SpectralField nonlinear_term(const SpectralField& phi, const ModelParams& params, bool dealias) {
    const auto& pot = params.potential;
    const double nu = params.nu;
    const auto omega = phi.grid().eigenvalues();

    SpectralField f_hat = nodal_map(phi, [&pot](double s) { return pot.f(s); }, dealias);
    SpectralField w_hat = f_hat;
    for (std::size_t k = 0; k < w_hat.size(); ++k)
        w_hat[k] += omega[k] * phi[k]; // w = -Lap phi + f(phi)

    SpectralField fp_hat =
        nodal_map(phi, [&pot, nu](double s) { return pot.f1(s) + nu; }, dealias);
    SpectralField out = nodal_product(fp_hat, w_hat, dealias);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] += omega[k] * f_hat[k]; // -Lap f(phi)
    return out;
}

void check_blowup(const SpectralField& phi, const StepperConfig& cfg, double t) {
    const double m = norm(phi, NormKind::Linf);
    if (!(m <= cfg.blowup_bound))
        throw SolverError("state solver blow-up: nodal max " + std::to_string(m) +
                              " exceeds bound " + std::to_string(cfg.blowup_bound),
                          t);
}

} // namespace

ControlSchedule ControlSchedule::zero(const Grid& grid) {
    return constant(GridField(grid));
}

ControlSchedule ControlSchedule::constant(GridField value) {
    ControlSchedule s;
    s.constant_ = std::move(value);
    return s;
}

ControlSchedule ControlSchedule::per_step(std::vector<GridField> fields) {
    if (fields.empty())
        throw Error("per-step control schedule needs at least one step");
    for (const auto& f : fields)
        if (f.grid() != fields.front().grid())
            throw Error("control schedule fields live on different grids");
    ControlSchedule s;
    s.per_step_ = std::move(fields);
    return s;
}

int ControlSchedule::steps() const {
    return constant_ ? -1 : static_cast<int>(per_step_.size());
}

const GridField& ControlSchedule::at(int n) const {
    if (constant_)
        return *constant_;
    if (n < 0 || n >= static_cast<int>(per_step_.size()))
        throw Error("control schedule has no step " + std::to_string(n));
    return per_step_[static_cast<std::size_t>(n)];
}

const Grid& ControlSchedule::grid() const {
    return constant_ ? constant_->grid() : per_step_.front().grid();
}

ControlSchedule ControlSchedule::materialize(int m) const {
    if (m < 1)
        throw Error("materialize: step count must be >= 1");
    if (!constant_ && static_cast<int>(per_step_.size()) != m)
        throw Error("control schedule length does not match step count");
    std::vector<GridField> fields;
    fields.reserve(static_cast<std::size_t>(m));
    for (int n = 0; n < m; ++n)
        fields.push_back(at(n));
    return per_step(std::move(fields));
}

SpectralField w_field(const SpectralField& phi, const ModelParams& params, bool dealias) {
    const auto& pot = params.potential;
    SpectralField w = nodal_map(phi, [&pot](double s) { return pot.f(s); }, dealias);
    const auto omega = phi.grid().eigenvalues();
    for (std::size_t k = 0; k < w.size(); ++k)
        w[k] += omega[k] * phi[k];
    return w;
}

SpectralField chemical_potential(const SpectralField& phi, const ModelParams& params,
                                 bool dealias) {
    params.validate();
    SpectralField mu = nonlinear_term(phi, params, dealias);
    const auto omega = phi.grid().eigenvalues();
    for (std::size_t k = 0; k < mu.size(); ++k)
        mu[k] += omega[k] * omega[k] * phi[k]; // Lap^2 phi
    return mu;
}

SpectralField step(const SpectralField& phi, const GridField& u_n, const ModelParams& params,
                   const StepperConfig& cfg, double t_now) {
    cfg.validate();
    params.validate();
    if (u_n.grid() != phi.grid())
        throw Error("step: control grid mismatch");

    const SpectralField u_hat = to_spectral(u_n);
    const SpectralField nl = nonlinear_term(phi, params, cfg.dealias);
    const auto omega = phi.grid().eigenvalues();
    const double dt = cfg.dt;

    SpectralField next = phi;
    for (std::size_t k = 0; k < next.size(); ++k) {
        const double w = omega[k];
        const double shift = cfg.stab_a * w * w + cfg.stab_b * w;
        const double numer = phi[k] + dt * (u_hat[k] - w * nl[k] + shift * phi[k]);
        const double denom = 1.0 + dt * (w * w * w + shift + params.sigma);
        next[k] = numer / denom;
    }
    check_blowup(next, cfg, t_now + dt);
    return next;
}

StateTrajectory simulate(const SpectralField& phi0, const ControlSchedule& u,
                         const ModelParams& params, const StepperConfig& cfg, double T) {
    cfg.validate();
    params.validate();
    if (!(T > 0.0))
        throw Error("simulate: T must be > 0");
    if (u.grid() != phi0.grid())
        throw Error("simulate: control grid mismatch");
    const double steps_exact = T / cfg.dt;
    const int m = static_cast<int>(std::llround(steps_exact));
    if (m < 1 || std::abs(steps_exact - m) > 1e-9 * steps_exact)
        throw Error("simulate: T must be an integer multiple of dt");
    if (!u.is_constant() && u.steps() < m)
        throw Error("simulate: control schedule shorter than the run");

    StateTrajectory traj;
    traj.params_ = params;
    traj.cfg_ = cfg;
    traj.u_ = u;
    traj.times_.reserve(static_cast<std::size_t>(m) + 1);
    traj.phi_.reserve(static_cast<std::size_t>(m) + 1);
    traj.diag_.reserve(static_cast<std::size_t>(m) + 1);

    const auto& pot = params.potential;
    auto record = [&](double t, const SpectralField& phi) {
        StepDiagnostics d;
        d.time = t;
        d.mean = mean(phi);
        d.energy = energy(phi, params);
        d.nodal_max = norm(phi, NormKind::Linf);
        const GridField nod = to_nodal(phi);
        double req = 0.0;
        for (double v : nod.values())
            req = std::max(req, std::abs(pot.f1(v)));
        d.stab_requirement = req + std::abs(params.nu);
        traj.diag_.push_back(d);
    };

    SpectralField phi = phi0;
    check_blowup(phi, cfg, 0.0);
    traj.times_.push_back(0.0);
    traj.phi_.push_back(phi);
    record(0.0, phi);

    for (int n = 0; n < m; ++n) {
        const double t = n * cfg.dt;
        phi = step(phi, u.at(n), params, cfg, t);
        const double t_next = (n + 1) * cfg.dt;
        traj.times_.push_back(t_next);
        traj.phi_.push_back(phi);
        record(t_next, phi);
    }
    return traj;
}

SpectralField StateTrajectory::w(int i) const {
    return w_field(phi_[static_cast<std::size_t>(i)], params_, cfg_.dealias);
}

SpectralField StateTrajectory::mu(int i) const {
    return chemical_potential(phi_[static_cast<std::size_t>(i)], params_, cfg_.dealias);
}

double energy(const SpectralField& phi, const ModelParams& params) {
    const auto& pot = params.potential;
    const GridField phi_nod = to_nodal(phi);
    const GridField lap_nod = to_nodal(laplacian(phi));

    double well = 0.0; // int (-Lap phi + f(phi))^2 via midpoint quadrature
    double fint = 0.0; // int F(phi)
    for (std::size_t j = 0; j < phi_nod.size(); ++j) {
        const double w = -lap_nod[j] + pot.f(phi_nod[j]);
        well += w * w;
        fint += pot.F(phi_nod[j]);
    }
    const double quad_w = phi.grid().volume() / static_cast<double>(phi_nod.size());
    well *= quad_w;
    fint *= quad_w;

    double grad2 = 0.0; // |grad phi|^2 = sum omega_k c_k^2
    const auto omega = phi.grid().eigenvalues();
    for (std::size_t k = 0; k < phi.size(); ++k)
        grad2 += omega[k] * phi[k] * phi[k];

    return 0.5 * well + params.nu * (0.5 * grad2 + fint);
}

double mass_ode_reference(double mean0, double u_mean, double sigma, double t) {
    if (!(t >= 0.0))
        throw Error("mass_ode_reference: t must be >= 0");
    if (sigma > 0.0)
        return std::exp(-sigma * t) * mean0 + (u_mean / sigma) * (1.0 - std::exp(-sigma * t));
    return mean0 + u_mean * t;
}

double mass_ode_reference(double mean0, std::span<const double> u_means, double sigma, double dt,
                          double t) {
    if (!(t >= 0.0) || !(dt > 0.0))
        throw Error("mass_ode_reference: bad time arguments");
    double m = mean0;
    double done = 0.0;
    std::size_t n = 0;
    while (done < t - 1e-12 * std::max(t, 1.0)) {
        const double span = std::min(dt, t - done);
        const double ubar = n < u_means.size() ? u_means[n] : 0.0;
        m = mass_ode_reference(m, ubar, sigma, span);
        done += span;
        ++n;
    }
    return m;
}

EnergyIdentityResult residual_energy_identity(const StateTrajectory& traj) {
    EnergyIdentityResult res;
    const int m = traj.steps();
    res.residuals.reserve(static_cast<std::size_t>(m));
    const double dt = traj.config().dt;
    const double sigma = traj.params().sigma;
    const auto omega = traj.grid().eigenvalues();

    for (int n = 0; n < m; ++n) {
        SpectralField mid = traj.phi(n);
        axpy(1.0, traj.phi(n + 1), mid);
        mid *= 0.5;
        const SpectralField mu_mid = chemical_potential(mid, traj.params(), traj.config().dealias);

        double dissip = 0.0; // int |grad mu|^2
        for (std::size_t k = 0; k < mu_mid.size(); ++k)
            dissip += omega[k] * mu_mid[k] * mu_mid[k];

        SpectralField src = to_spectral(traj.control().at(n));
        axpy(-sigma, mid, src);
        const double source = inner_h(src, mu_mid);

        const double de =
            (traj.diagnostics()[n + 1].energy - traj.diagnostics()[n].energy) / dt;
        const double r = de + dissip - source;
        res.residuals.push_back(r);
        res.max_abs = std::max(res.max_abs, std::abs(r));
    }
    return res;
}

} // namespace ch6
