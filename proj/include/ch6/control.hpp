// control.hpp - tracking cost, box constraints and projected-gradient solver
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "ch6/sensitivity.hpp"
#include "ch6/state.hpp"

namespace ch6 {

// Spectral tracking target, constant in time or one field per step
// (left-endpoint convention, matching piecewise-constant controls).
class TargetSchedule {
public:
    TargetSchedule() = default; // zero target
    static TargetSchedule constant(SpectralField value);
    static TargetSchedule per_step(std::vector<SpectralField> fields);

    bool is_zero() const { return !constant_ && per_step_.empty(); }
    const SpectralField& at(int n) const;
    int steps() const; // -1 when constant or zero

private:
    std::optional<SpectralField> constant_;
    std::vector<SpectralField> per_step_;
};

struct CostConfig {
    double alpha1 = 0.0; // distributed tracking weight
    double alpha2 = 0.0; // terminal tracking weight
    double alpha3 = 0.0; // control cost weight
    TargetSchedule phi_Q;
    std::optional<SpectralField> phi_Omega;

    void validate() const;
};

// Pointwise bounds u_min <= u <= u_max over Q. Each bound is a scalar, a
// spatial field (constant in time), or one scalar per step.
class BoxConstraints {
public:
    using Bound = std::variant<double, GridField, std::vector<double>>;

    BoxConstraints(Bound lo, Bound hi);
    static BoxConstraints unbounded();

    double lo(int step, std::size_t node) const;
    double hi(int step, std::size_t node) const;
    GridField clamp(const GridField& u, int step) const;
    void validate(const Grid& grid) const; // lo <= hi everywhere

private:
    Bound lo_;
    Bound hi_;
};

// J = alpha1/2 int_Q |phi - phi_Q|^2 + alpha2/2 int |phi(T) - phi_Omega|^2
//   + alpha3/2 int_Q |u|^2, with the left-endpoint rule in time.
double cost(const StateTrajectory& state, const ControlSchedule& u, const CostConfig& cfg);

// Riesz representative alpha3 u + p of the reduced cost gradient, one nodal
// field per step (p sampled at the left endpoint).
std::vector<GridField> reduced_gradient(const ControlSchedule& u, const AdjTrajectory& adjoint,
                                        double alpha3);

ControlSchedule project_box(const ControlSchedule& u, const BoxConstraints& box, int steps);

// || u - P(u - tau g) ||_{L^2(Q)} / tau; zero iff the discrete variational
// inequality holds at u. dt supplies the time quadrature weight.
double stationarity_residual(const ControlSchedule& u, const std::vector<GridField>& gradient,
                             const BoxConstraints& box, double trial_step, double dt);

struct OptimizeOptions {
    int max_iters = 100;
    double step0 = 1.0;      // initial trial step
    double armijo_c1 = 1e-4; // sufficient-decrease factor
    double shrink = 0.5;     // backtracking factor
    double tol = 1e-4;       // stationarity tolerance
    int max_backtracks = 60;
    double step_min = 1e-14; // below this the line search reports collapse
    // observer invoked on every accepted iterate (including the projected u0)
    std::function<void(int iter, const ControlSchedule& u)> on_iterate;

    void validate() const;
};

enum class Termination { stationarity, max_iters, step_collapse };

struct OptimizeResult {
    ControlSchedule u_star;
    std::vector<double> j_history;            // accepted iterates only
    std::vector<double> stationarity_history; // one entry per accepted iterate
    std::vector<double> step_history;         // accepted tau (0 for the initial iterate)
    StateTrajectory state;                    // at u_star
    AdjTrajectory adjoint;                    // at u_star
    Termination reason = Termination::max_iters;
    int iterations = 0;
};

// Projected gradient with Armijo backtracking for the tracking problem:
//   u_{k+1} = P_box(u_k - tau_k (alpha3 u_k + p_k)).
OptimizeResult optimize(const SpectralField& phi0, const ControlSchedule& u0,
                        const ModelParams& params, const StepperConfig& cfg, double T,
                        const CostConfig& cost_cfg, const BoxConstraints& box,
                        const OptimizeOptions& opts);

struct GradientCheckResult {
    std::vector<double> adjoint_derivatives; // <g, d> per direction
    std::vector<double> fd_derivatives;      // central differences of J
    std::vector<double> rel_errors;
    double max_rel_error = 0.0;
};

// Central finite differences of the discrete J along `directions` random
// smooth directions (two extra forward solves each) against the adjoint
// gradient.
GradientCheckResult gradient_check(const SpectralField& phi0, const ControlSchedule& u,
                                   const ModelParams& params, const StepperConfig& cfg, double T,
                                   const CostConfig& cost_cfg, int directions, double eps,
                                   std::uint64_t seed);

} // namespace ch6
