// sensitivity.hpp - linearized (forward) and adjoint (backward) systems
#pragma once

#include <vector>

#include "ch6/state.hpp"

namespace ch6 {

struct CostConfig; // control.hpp

// Solution of the linearized system driven by h, riding on a frozen state
// trajectory: psi is the directional derivative of the control-to-state map,
// with eta and omega the linearized chemical potential and auxiliary field.
struct LinTrajectory {
    std::vector<double> times;
    std::vector<SpectralField> psi;
    std::vector<SpectralField> eta;
    std::vector<SpectralField> omega;
};

// Integrates  d/dt psi = Lap eta - sigma psi + h  with
//   eta   = -Lap omega + xi psi + (zeta + nu) omega,
//   omega = -Lap psi + zeta psi,
// where zeta = f'(phi) and xi = f''(phi) w are frozen from the state
// trajectory at the left endpoint of each step; same IMEX denominators as
// the state stepper; psi(0) = 0.
LinTrajectory solve_linearized(const StateTrajectory& state, const ControlSchedule& h);

// Adjoint state: p converts the tracking misfit into control space.
struct AdjTrajectory {
    std::vector<double> times;
    std::vector<SpectralField> p;
    std::vector<SpectralField> q;
    std::vector<SpectralField> r;
};

// Integrates backward in time
//   -d/dt p = Lap r - sigma p - xi q - zeta r + alpha1 (phi - phi_Q),
//   q = -Lap p,   r = -Lap q + (nu + zeta) q,
// from the terminal condition p(T) = alpha2 (phi(T) - phi_Omega), with the
// same per-mode implicit denominators as the forward solve.
AdjTrajectory solve_adjoint(const StateTrajectory& state, const CostConfig& cost);

// Quadratic-remainder ratios R(eps)/eps^2 with
// R(eps) = max_t || S(u + eps h) - S(u) - eps psi ||_H.
// Bounded ratios witness Frechet differentiability of the control-to-state
// map; with the linear-test potential the map is affine and R vanishes.
std::vector<double> taylor_remainder_ratios(const SpectralField& phi0, const ControlSchedule& u,
                                            const ControlSchedule& h,
                                            std::span<const double> eps_list,
                                            const ModelParams& params, const StepperConfig& cfg,
                                            double T);

} // namespace ch6
