// control.cpp - cost functional, projection and projected-gradient loop
#include "ch6/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ch6 {

namespace {

double l2q_inner(const std::vector<GridField>& a, const std::vector<GridField>& b, double dt) {
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
        s += dt * inner_h(a[n], b[n]);
    return s;
}

std::vector<GridField> schedule_fields(const ControlSchedule& u, int m) {
    std::vector<GridField> f;
    f.reserve(static_cast<std::size_t>(m));
    for (int n = 0; n < m; ++n)
        f.push_back(u.at(n));
    return f;
}

} // namespace

TargetSchedule TargetSchedule::constant(SpectralField value) {
    TargetSchedule t;
    t.constant_ = std::move(value);
    return t;
}

TargetSchedule TargetSchedule::per_step(std::vector<SpectralField> fields) {
    if (fields.empty())
        throw Error("per-step target schedule needs at least one step");
    TargetSchedule t;
    t.per_step_ = std::move(fields);
    return t;
}

const SpectralField& TargetSchedule::at(int n) const {
    if (constant_)
        return *constant_;
    if (n < 0 || n >= static_cast<int>(per_step_.size()))
        throw Error("target schedule has no step " + std::to_string(n));
    return per_step_[static_cast<std::size_t>(n)];
}

int TargetSchedule::steps() const {
    return per_step_.empty() ? -1 : static_cast<int>(per_step_.size());
}

void CostConfig::validate() const {
    if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0) || !(alpha3 >= 0.0))
        throw Error("cost weights must be >= 0");
    if (alpha1 == 0.0 && alpha2 == 0.0 && alpha3 == 0.0)
        throw Error("cost weights must not all be zero");
}

BoxConstraints::BoxConstraints(Bound lo, Bound hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

BoxConstraints BoxConstraints::unbounded() {
    return BoxConstraints(-1e300, 1e300);
}

namespace {
double bound_value(const BoxConstraints::Bound& b, int step, std::size_t node) {
    if (const double* c = std::get_if<double>(&b))
        return *c;
    if (const GridField* f = std::get_if<GridField>(&b))
        return (*f)[node];
    const auto& per_step = std::get<std::vector<double>>(b);
    if (step < 0 || step >= static_cast<int>(per_step.size()))
        throw Error("box constraint has no step " + std::to_string(step));
    return per_step[static_cast<std::size_t>(step)];
}
} // namespace

double BoxConstraints::lo(int step, std::size_t node) const { return bound_value(lo_, step, node); }
double BoxConstraints::hi(int step, std::size_t node) const { return bound_value(hi_, step, node); }

GridField BoxConstraints::clamp(const GridField& u, int step) const {
    GridField out = u;
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = std::min(std::max(out[j], lo(step, j)), hi(step, j));
    return out;
}

void BoxConstraints::validate(const Grid& grid) const {
    if (const GridField* f = std::get_if<GridField>(&lo_))
        if (f->grid() != grid)
            throw Error("u_min field grid mismatch");
    if (const GridField* f = std::get_if<GridField>(&hi_))
        if (f->grid() != grid)
            throw Error("u_max field grid mismatch");
    const int steps = std::max(
        std::holds_alternative<std::vector<double>>(lo_)
            ? static_cast<int>(std::get<std::vector<double>>(lo_).size()) : 1,
        std::holds_alternative<std::vector<double>>(hi_)
            ? static_cast<int>(std::get<std::vector<double>>(hi_).size()) : 1);
    for (int n = 0; n < steps; ++n)
        for (std::size_t j = 0; j < grid.mode_count(); ++j)
            if (!(lo(n, j) <= hi(n, j)))
                throw Error("admissible set empty: u_min > u_max at a point");
}

double cost(const StateTrajectory& state, const ControlSchedule& u, const CostConfig& cfg) {
    cfg.validate();
    const int m = state.steps();
    const double dt = state.config().dt;
    if (u.grid() != state.grid())
        throw Error("cost: control grid mismatch");

    double j1 = 0.0;
    if (cfg.alpha1 != 0.0) {
        for (int n = 0; n < m; ++n) { // left-endpoint rule
            SpectralField d = state.phi(n);
            if (!cfg.phi_Q.is_zero())
                d -= cfg.phi_Q.at(n);
            const double nn = norm(d, NormKind::H);
            j1 += dt * nn * nn;
        }
    }
    double j2 = 0.0;
    if (cfg.alpha2 != 0.0) {
        if (!cfg.phi_Omega)
            throw Error("cost: alpha2 > 0 requires a terminal target");
        SpectralField d = state.phi(m);
        d -= *cfg.phi_Omega;
        const double nn = norm(d, NormKind::H);
        j2 = nn * nn;
    }
    double j3 = 0.0;
    if (cfg.alpha3 != 0.0) {
        for (int n = 0; n < m; ++n) {
            const GridField& un = u.at(n);
            j3 += dt * inner_h(un, un);
        }
    }
    return 0.5 * (cfg.alpha1 * j1 + cfg.alpha2 * j2 + cfg.alpha3 * j3);
}

std::vector<GridField> reduced_gradient(const ControlSchedule& u, const AdjTrajectory& adjoint,
                                        double alpha3) {
    const int m = static_cast<int>(adjoint.p.size()) - 1;
    std::vector<GridField> g;
    g.reserve(static_cast<std::size_t>(m));
    for (int n = 0; n < m; ++n) {
        GridField gn = to_nodal(adjoint.p[static_cast<std::size_t>(n)]);
        axpy(alpha3, u.at(n), gn);
        g.push_back(std::move(gn));
    }
    return g;
}

ControlSchedule project_box(const ControlSchedule& u, const BoxConstraints& box, int steps) {
    std::vector<GridField> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int n = 0; n < steps; ++n)
        out.push_back(box.clamp(u.at(n), n));
    return ControlSchedule::per_step(std::move(out));
}

double stationarity_residual(const ControlSchedule& u, const std::vector<GridField>& gradient,
                             const BoxConstraints& box, double trial_step, double dt) {
    if (!(trial_step > 0.0))
        throw Error("stationarity_residual: trial step must be > 0");
    double s = 0.0;
    for (std::size_t n = 0; n < gradient.size(); ++n) {
        GridField trial = u.at(static_cast<int>(n));
        axpy(-trial_step, gradient[n], trial);
        const GridField proj = box.clamp(trial, static_cast<int>(n));
        GridField d = u.at(static_cast<int>(n));
        d -= proj;
        s += dt * inner_h(d, d);
    }
    return std::sqrt(s) / trial_step;
}

void OptimizeOptions::validate() const {
    if (max_iters < 0)
        throw Error("max_iters must be >= 0");
    if (!(step0 > 0.0) || !(shrink > 0.0) || !(shrink < 1.0))
        throw Error("bad line-search parameters");
    if (!(armijo_c1 > 0.0) || !(armijo_c1 < 1.0))
        throw Error("armijo_c1 must be in (0,1)");
    if (!(tol >= 0.0))
        throw Error("tol must be >= 0");
}

OptimizeResult optimize(const SpectralField& phi0, const ControlSchedule& u0,
                        const ModelParams& params, const StepperConfig& cfg, double T,
                        const CostConfig& cost_cfg, const BoxConstraints& box,
                        const OptimizeOptions& opts) {
    opts.validate();
    cost_cfg.validate();
    box.validate(phi0.grid());
    const int m = static_cast<int>(std::llround(T / cfg.dt));

    ControlSchedule u = project_box(u0.materialize(m), box, m);

    auto forward = [&](const ControlSchedule& uu, int iterate) {
        try {
            return simulate(phi0, uu, params, cfg, T);
        } catch (const SolverError& e) {
            throw SolverError("forward solve failed at iterate " + std::to_string(iterate) +
                                  ": " + e.what(),
                              e.time());
        }
    };

    OptimizeResult res;
    StateTrajectory state = forward(u, 0);
    double j = cost(state, u, cost_cfg);
    AdjTrajectory adj = solve_adjoint(state, cost_cfg);
    std::vector<GridField> grad = reduced_gradient(u, adj, cost_cfg.alpha3);
    double stat = stationarity_residual(u, grad, box, 1.0, cfg.dt);
    if (opts.on_iterate)
        opts.on_iterate(0, u);

    res.j_history.push_back(j);
    res.stationarity_history.push_back(stat);
    res.step_history.push_back(0.0);

    double trial = opts.step0;
    int k = 0;
    res.reason = Termination::max_iters;
    while (true) {
        if (stat <= opts.tol) {
            res.reason = Termination::stationarity;
            break;
        }
        if (k >= opts.max_iters)
            break;

        bool accepted = false;
        double accepted_tau = 0.0;
        double tau = trial;
        for (int bt = 0; bt < opts.max_backtracks && tau >= opts.step_min; ++bt) {
            std::vector<GridField> cand_fields;
            cand_fields.reserve(static_cast<std::size_t>(m));
            for (int n = 0; n < m; ++n) {
                GridField cn = u.at(n);
                axpy(-tau, grad[n], cn);
                cand_fields.push_back(box.clamp(cn, n));
            }
            ControlSchedule cand = ControlSchedule::per_step(std::move(cand_fields));

            // predicted decrease <g, u - P(u - tau g)>
            std::vector<GridField> diff = schedule_fields(u, m);
            for (int n = 0; n < m; ++n)
                axpy(-1.0, cand.at(n), diff[static_cast<std::size_t>(n)]);
            const double dec = l2q_inner(grad, diff, cfg.dt);
            if (!(dec > 0.0)) {
                tau *= opts.shrink;
                continue;
            }

            bool blew_up = false;
            StateTrajectory cand_state;
            try {
                cand_state = simulate(phi0, cand, params, cfg, T);
            } catch (const SolverError&) {
                blew_up = true; // treat as insufficient decrease and shrink
            }
            if (!blew_up) {
                const double cand_j = cost(cand_state, cand, cost_cfg);
                if (cand_j <= j - opts.armijo_c1 * dec) {
                    u = std::move(cand);
                    state = std::move(cand_state);
                    j = cand_j;
                    accepted = true;
                    accepted_tau = tau;
                    trial = 2.0 * tau; // warm-start the next search
                    break;
                }
            }
            tau *= opts.shrink;
        }
        if (!accepted) {
            res.reason = Termination::step_collapse;
            break;
        }

        adj = solve_adjoint(state, cost_cfg);
        grad = reduced_gradient(u, adj, cost_cfg.alpha3);
        stat = stationarity_residual(u, grad, box, 1.0, cfg.dt);
        ++k;
        if (opts.on_iterate)
            opts.on_iterate(k, u);
        res.j_history.push_back(j);
        res.stationarity_history.push_back(stat);
        res.step_history.push_back(accepted_tau);
    }

    res.u_star = std::move(u);
    res.state = std::move(state);
    res.adjoint = std::move(adj);
    res.iterations = k;
    return res;
}

GradientCheckResult gradient_check(const SpectralField& phi0, const ControlSchedule& u,
                                   const ModelParams& params, const StepperConfig& cfg, double T,
                                   const CostConfig& cost_cfg, int directions, double eps,
                                   std::uint64_t seed) {
    if (directions < 1 || !(eps > 0.0))
        throw Error("gradient_check: need directions >= 1 and eps > 0");
    const int m = static_cast<int>(std::llround(T / cfg.dt));
    const ControlSchedule uu = u.materialize(m);

    const StateTrajectory state = simulate(phi0, uu, params, cfg, T);
    const AdjTrajectory adj = solve_adjoint(state, cost_cfg);
    const std::vector<GridField> grad = reduced_gradient(uu, adj, cost_cfg.alpha3);

    GradientCheckResult res;
    for (int d = 0; d < directions; ++d) {
        // random smooth direction, constant in time
        const GridField dir =
            to_nodal(random_smooth_field(phi0.grid(), 1.0, seed + static_cast<std::uint64_t>(d)));
        std::vector<GridField> dir_fields(static_cast<std::size_t>(m), dir);

        const double adjoint_dir = l2q_inner(grad, dir_fields, cfg.dt);

        auto j_at = [&](double shift) {
            std::vector<GridField> fields = schedule_fields(uu, m);
            for (auto& f : fields)
                axpy(shift, dir, f);
            const ControlSchedule us = ControlSchedule::per_step(std::move(fields));
            return cost(simulate(phi0, us, params, cfg, T), us, cost_cfg);
        };
        const double fd = (j_at(eps) - j_at(-eps)) / (2.0 * eps);

        const double scale = std::max({std::abs(fd), std::abs(adjoint_dir), 1e-300});
        const double rel = std::abs(fd - adjoint_dir) / scale;
        res.adjoint_derivatives.push_back(adjoint_dir);
        res.fd_derivatives.push_back(fd);
        res.rel_errors.push_back(rel);
        res.max_rel_error = std::max(res.max_rel_error, rel);
    }
    return res;
}

} // namespace ch6
