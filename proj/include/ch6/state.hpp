// state.hpp - semi-implicit time integration of the sixth-order state system
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ch6/field.hpp"
#include "ch6/operators.hpp"
#include "ch6/potential.hpp"

namespace ch6 {

// Time discretization knobs. The implicit part of every step is the
// constant-coefficient operator Lap^3 - A Lap^2 + B Lap - sigma together
// with compensating explicit shifts, so each spectral mode updates
// independently:
//
//   phi_{n+1,k} = [ phi_nk + dt (u_k - w_k NL_k + (A w_k^2 + B w_k) phi_nk) ]
//                 / [ 1 + dt (w_k^3 + A w_k^2 + B w_k + sigma) ]
//
// with w_k the Neumann eigenvalue and NL the nonlinear remainder of the
// chemical potential.
struct StepperConfig {
    double dt = 1e-3;
    double stab_a = 2.0; // A
    double stab_b = 2.0; // B
    bool dealias = false;
    double blowup_bound = 1e3; // nodal max beyond which the step fails

    void validate() const {
        if (!(dt > 0.0))
            throw Error("dt must be > 0");
        if (!(stab_a >= 0.0) || !(stab_b >= 0.0))
            throw Error("stabilization coefficients must be >= 0");
    }
};

// Piecewise-constant-in-time control on the step grid, stored nodally so
// box constraints clamp exact nodal values.
class ControlSchedule {
public:
    ControlSchedule() = default;
    static ControlSchedule zero(const Grid& grid);
    static ControlSchedule constant(GridField value);
    static ControlSchedule per_step(std::vector<GridField> fields);

    bool is_constant() const { return constant_.has_value(); }
    // Number of stored steps; constant schedules fit any horizon.
    int steps() const;
    const GridField& at(int n) const;
    const Grid& grid() const;

    // Materialized per-step copy over M steps (used by the optimizer).
    ControlSchedule materialize(int m) const;

private:
    std::optional<GridField> constant_;
    std::vector<GridField> per_step_;
};

struct StepDiagnostics {
    double time = 0.0;
    double mean = 0.0;
    double energy = 0.0;
    double nodal_max = 0.0;
    // max |f'(phi)| + |nu| at this snapshot; stabilization should dominate it
    double stab_requirement = 0.0;
};

// Completed run of the state system: snapshots of phi on a uniform time
// grid, the control that produced them, and per-snapshot diagnostics.
// mu and w are derived on demand. Immutable after simulate().
class StateTrajectory {
public:
    int steps() const { return static_cast<int>(times_.size()) - 1; }
    std::span<const double> times() const { return times_; }
    double time(int i) const { return times_[i]; }
    double final_time() const { return times_.back(); }
    const SpectralField& phi(int i) const { return phi_[i]; }
    const ControlSchedule& control() const { return u_; }
    const ModelParams& params() const { return params_; }
    const StepperConfig& config() const { return cfg_; }
    const Grid& grid() const { return phi_[0].grid(); }
    std::span<const StepDiagnostics> diagnostics() const { return diag_; }

    SpectralField w(int i) const;  // -Lap phi + f(phi)
    SpectralField mu(int i) const; // chemical potential at snapshot i

    friend StateTrajectory simulate(const SpectralField&, const ControlSchedule&,
                                    const ModelParams&, const StepperConfig&, double);

private:
    std::vector<double> times_;
    std::vector<SpectralField> phi_;
    ControlSchedule u_;
    ModelParams params_;
    StepperConfig cfg_;
    std::vector<StepDiagnostics> diag_;
};

// w = -Lap phi + f(phi)
SpectralField w_field(const SpectralField& phi, const ModelParams& params, bool dealias = false);

// mu = Lap^2 phi - Lap f(phi) - (f'(phi) + nu) Lap phi + (f'(phi) + nu) f(phi),
// assembled with spectral derivatives and nodal products. Equivalently
// mu = -Lap w + (f'(phi) + nu) w; the two agree to roundoff.
SpectralField chemical_potential(const SpectralField& phi, const ModelParams& params,
                                 bool dealias = false);

// One semi-implicit step; throws SolverError when the nodal max exceeds the
// blow-up bound. t_now is only used to report the failing time.
SpectralField step(const SpectralField& phi, const GridField& u_n, const ModelParams& params,
                   const StepperConfig& cfg, double t_now = 0.0);

// Integrate over [0, T] with M = round(T/dt) steps (T/dt must be integral to
// 1e-9 relative). Stores every snapshot.
StateTrajectory simulate(const SpectralField& phi0, const ControlSchedule& u,
                         const ModelParams& params, const StepperConfig& cfg, double T);

// E(phi) = 1/2 int (-Lap phi + f(phi))^2 + nu int (|grad phi|^2 / 2 + F(phi))
double energy(const SpectralField& phi, const ModelParams& params);

// Closed-form solution of  d/dt m + sigma m = u_bar  with constant u_bar.
double mass_ode_reference(double mean0, double u_mean, double sigma, double t);
// Exact integration against a piecewise-constant mean schedule on steps of dt.
double mass_ode_reference(double mean0, std::span<const double> u_means, double sigma,
                          double dt, double t);

struct EnergyIdentityResult {
    std::vector<double> residuals; // one per step
    double max_abs = 0.0;
};

// Residual of the discrete energy identity
//   dE/dt + int |grad mu|^2 = int (u - sigma phi) mu,
// with one-sided differences of E and midpoint-in-step evaluation of mu.
EnergyIdentityResult residual_energy_identity(const StateTrajectory& traj);

} // namespace ch6
