// sensitivity.cpp - linearized and adjoint solves on a frozen trajectory
#include "ch6/sensitivity.hpp"

#include <algorithm>
#include <cmath>

#include "ch6/control.hpp"

namespace ch6 {

namespace {

// Frozen coefficients of one snapshot: zeta = f'(phi), xi = f''(phi) w,
// and zeta_nu = zeta + nu (as spectral fields, products done nodally).
struct FrozenCoeffs {
    SpectralField zeta;
    SpectralField zeta_nu;
    SpectralField xi;
};

FrozenCoeffs freeze(const StateTrajectory& state, int i) {
    const auto& pot = state.params().potential;
    const double nu = state.params().nu;
    const bool dealias = state.config().dealias;
    const SpectralField& phi = state.phi(i);

    FrozenCoeffs c;
    c.zeta = nodal_map(phi, [&pot](double s) { return pot.f1(s); }, dealias);
    c.zeta_nu = c.zeta;
    c.zeta_nu[0] += nu * std::sqrt(phi.grid().volume()); // + nu * 1
    SpectralField fpp = nodal_map(phi, [&pot](double s) { return pot.f2(s); }, dealias);
    c.xi = nodal_product(fpp, state.w(i), dealias);
    return c;
}

// omega_lin = -Lap psi + zeta psi
SpectralField omega_of(const SpectralField& psi, const FrozenCoeffs& c, bool dealias) {
    SpectralField om = nodal_product(c.zeta, psi, dealias);
    const auto ev = psi.grid().eigenvalues();
    for (std::size_t k = 0; k < om.size(); ++k)
        om[k] += ev[k] * psi[k];
    return om;
}

} // namespace

LinTrajectory solve_linearized(const StateTrajectory& state, const ControlSchedule& h) {
    if (h.grid() != state.grid())
        throw Error("solve_linearized: direction grid mismatch");
    const int m = state.steps();
    if (!h.is_constant() && h.steps() < m)
        throw Error("solve_linearized: direction schedule shorter than the run");
    const StepperConfig& cfg = state.config();
    const double dt = cfg.dt;
    const double sigma = state.params().sigma;
    const auto ev = state.grid().eigenvalues();

    LinTrajectory lin;
    lin.times.assign(state.times().begin(), state.times().end());
    lin.psi.reserve(static_cast<std::size_t>(m) + 1);
    lin.eta.reserve(static_cast<std::size_t>(m) + 1);
    lin.omega.reserve(static_cast<std::size_t>(m) + 1);

    SpectralField psi(state.grid()); // psi(0) = 0

    auto snapshot = [&](const SpectralField& cur, const FrozenCoeffs& c) {
        // eta = Lap^2 psi + LinNL(psi) with LinNL = -Lap(zeta psi) + xi psi
        // + (zeta + nu) omega_lin
        SpectralField om = omega_of(cur, c, cfg.dealias);
        SpectralField eta = nodal_product(c.zeta_nu, om, cfg.dealias);
        eta += nodal_product(c.xi, cur, cfg.dealias);
        SpectralField zp = nodal_product(c.zeta, cur, cfg.dealias);
        for (std::size_t k = 0; k < eta.size(); ++k)
            eta[k] += ev[k] * zp[k] + ev[k] * ev[k] * cur[k];
        lin.psi.push_back(cur);
        lin.eta.push_back(std::move(eta));
        lin.omega.push_back(std::move(om));
    };

    for (int n = 0; n < m; ++n) {
        const FrozenCoeffs c = freeze(state, n);
        snapshot(psi, c);

        // explicit nonlinear part: LinNL(psi^n), same shape as the state NL
        SpectralField om = omega_of(psi, c, cfg.dealias);
        SpectralField nl = nodal_product(c.zeta_nu, om, cfg.dealias);
        nl += nodal_product(c.xi, psi, cfg.dealias);
        SpectralField zp = nodal_product(c.zeta, psi, cfg.dealias);
        const SpectralField h_hat = to_spectral(h.at(n));
        SpectralField next = psi;
        for (std::size_t k = 0; k < psi.size(); ++k) {
            const double w = ev[k];
            const double shift = cfg.stab_a * w * w + cfg.stab_b * w;
            const double nlk = nl[k] + w * zp[k];
            const double numer = psi[k] + dt * (h_hat[k] - w * nlk + shift * psi[k]);
            const double denom = 1.0 + dt * (w * w * w + shift + sigma);
            next[k] = numer / denom;
        }
        psi = std::move(next);
        if (!all_finite(psi.coeffs()))
            throw SolverError("linearized solve produced non-finite values", (n + 1) * dt);
    }
    snapshot(psi, freeze(state, m));
    return lin;
}

AdjTrajectory solve_adjoint(const StateTrajectory& state, const CostConfig& cost) {
    cost.validate();
    const int m = state.steps();
    const StepperConfig& cfg = state.config();
    const double dt = cfg.dt;
    const double sigma = state.params().sigma;
    const auto ev = state.grid().eigenvalues();

    if (cost.alpha2 > 0.0 && !cost.phi_Omega)
        throw Error("solve_adjoint: alpha2 > 0 requires a terminal target");
    if (cost.phi_Omega && cost.phi_Omega->grid() != state.grid())
        throw Error("solve_adjoint: terminal target grid mismatch");
    if (cost.phi_Q.steps() >= 0 && cost.phi_Q.steps() < m)
        throw Error("solve_adjoint: tracking target shorter than the run");

    // rho_1(t_n) = alpha1 (phi(t_n) - phi_Q(t_n)); defined for n < m only,
    // matching the left-endpoint time quadrature of the tracking cost
    auto rho1 = [&](int n) {
        if (n >= m || cost.alpha1 == 0.0)
            return SpectralField(state.grid());
        SpectralField r = state.phi(n);
        if (!cost.phi_Q.is_zero())
            r -= cost.phi_Q.at(n);
        r *= cost.alpha1;
        return r;
    };

    AdjTrajectory adj;
    adj.times.assign(state.times().begin(), state.times().end());
    adj.p.assign(static_cast<std::size_t>(m) + 1, SpectralField(state.grid()));
    adj.q.assign(static_cast<std::size_t>(m) + 1, SpectralField(state.grid()));
    adj.r.assign(static_cast<std::size_t>(m) + 1, SpectralField(state.grid()));

    // terminal condition p(T) = alpha2 (phi(T) - phi_Omega)
    SpectralField p(state.grid());
    if (cost.alpha2 != 0.0) {
        p = state.phi(m);
        p -= *cost.phi_Omega;
        p *= cost.alpha2;
    }

    auto q_of = [&ev](const SpectralField& pp) {
        SpectralField q = pp;
        for (std::size_t k = 0; k < q.size(); ++k)
            q[k] *= ev[k]; // q = -Lap p
        return q;
    };
    auto r_of = [&](const SpectralField& q, const FrozenCoeffs& c) {
        SpectralField r = nodal_product(c.zeta_nu, q, cfg.dealias); // (nu + zeta) q
        for (std::size_t k = 0; k < r.size(); ++k)
            r[k] += ev[k] * q[k]; // -Lap q
        return r;
    };

    {
        const FrozenCoeffs c = freeze(state, m);
        adj.p[static_cast<std::size_t>(m)] = p;
        adj.q[static_cast<std::size_t>(m)] = q_of(p);
        adj.r[static_cast<std::size_t>(m)] = r_of(adj.q[static_cast<std::size_t>(m)], c);
    }

    // backward sweep; crossing [t_n, t_{n+1}] the explicit data live at the
    // left endpoint in backward time, i.e. at t_{n+1}: the source is
    // rho_1(t_{n+1}) and the coefficients are frozen there, mirroring the
    // forward stepper
    for (int n = m - 1; n >= 0; --n) {
        const FrozenCoeffs c = freeze(state, n + 1);
        const SpectralField q = q_of(p);
        const SpectralField zq = nodal_product(c.zeta_nu, q, cfg.dealias);
        SpectralField r = zq;
        for (std::size_t k = 0; k < r.size(); ++k)
            r[k] += ev[k] * q[k];
        // explicit part: Lap((nu + zeta) q) - xi q - zeta r
        SpectralField expl = nodal_product(c.xi, q, cfg.dealias);
        expl += nodal_product(c.zeta, r, cfg.dealias);
        expl *= -1.0;
        for (std::size_t k = 0; k < expl.size(); ++k)
            expl[k] -= ev[k] * zq[k];

        const SpectralField src = rho1(n + 1);
        SpectralField prev = p;
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double w = ev[k];
            const double shift = cfg.stab_a * w * w + cfg.stab_b * w;
            const double numer = p[k] + dt * (src[k] + expl[k] + shift * p[k]);
            const double denom = 1.0 + dt * (w * w * w + shift + sigma);
            prev[k] = numer / denom;
        }
        p = std::move(prev);
        if (!all_finite(p.coeffs()))
            throw SolverError("adjoint solve produced non-finite values", n * dt);

        adj.p[static_cast<std::size_t>(n)] = p;
        adj.q[static_cast<std::size_t>(n)] = q_of(p);
        // snapshot r at t_n uses the coefficients of t_n
        adj.r[static_cast<std::size_t>(n)] =
            r_of(adj.q[static_cast<std::size_t>(n)], freeze(state, n));
    }
    return adj;
}

std::vector<double> taylor_remainder_ratios(const SpectralField& phi0, const ControlSchedule& u,
                                            const ControlSchedule& h,
                                            std::span<const double> eps_list,
                                            const ModelParams& params, const StepperConfig& cfg,
                                            double T) {
    const StateTrajectory base = simulate(phi0, u, params, cfg, T);
    const LinTrajectory lin = solve_linearized(base, h);
    const int m = base.steps();

    std::vector<double> ratios;
    ratios.reserve(eps_list.size());
    for (double eps : eps_list) {
        if (!(eps > 0.0))
            throw Error("taylor_remainder_ratios: eps must be > 0");
        std::vector<GridField> shifted;
        shifted.reserve(static_cast<std::size_t>(m));
        for (int n = 0; n < m; ++n) {
            GridField un = u.at(n);
            axpy(eps, h.at(n), un);
            shifted.push_back(std::move(un));
        }
        const StateTrajectory pert =
            simulate(phi0, ControlSchedule::per_step(std::move(shifted)), params, cfg, T);

        double r = 0.0; // C^0(H) norm of S(u+eps h) - S(u) - eps psi
        for (int i = 0; i <= m; ++i) {
            SpectralField d = pert.phi(i);
            d -= base.phi(i);
            axpy(-eps, lin.psi[static_cast<std::size_t>(i)], d);
            r = std::max(r, norm(d, NormKind::H));
        }
        ratios.push_back(r / (eps * eps));
    }
    return ratios;
}

} // namespace ch6
