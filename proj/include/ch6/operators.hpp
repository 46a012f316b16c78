// operators.hpp - differential operators, inverse Neumann Laplacian, means, norms
#pragma once

#include "ch6/field.hpp"

namespace ch6 {

// (-Laplace)^power on coefficients: mode k is scaled by (-omega_k)^power.
// Homogeneous Neumann conditions are built into the basis.
SpectralField laplacian(const SpectralField& v, int power = 1);

// Inverse Neumann Laplacian N: for zero-mean zeta returns the unique z with
// -Laplace z = zeta and zero mean (mode k divided by omega_k, mode 0 = 0).
// A nonzero mean is rejected unless auto_center is set, in which case the
// operator acts on zeta - mean(zeta).
SpectralField neumann_inverse(const SpectralField& zeta, bool auto_center = false);

double mean(const SpectralField& v);
double mean(const GridField& v);

// L^2(Omega) inner product; spectral pairs use Parseval, nodal pairs use
// midpoint quadrature. Mixed pairs are transformed first.
double inner_h(const SpectralField& a, const SpectralField& b);
double inner_h(const GridField& a, const GridField& b);

enum class NormKind { H, V, Vstar, Linf };

// H = L^2 norm; V^2 = H^2 + |grad .|^2; Vstar^2 = |grad N(v - mean)|^2 + mean^2
// (the dual Hilbert norm); Linf is the nodal max.
double norm(const SpectralField& v, NormKind kind);
double norm(const GridField& v, NormKind kind);

// Midpoint quadrature of the nodal values: (|Omega|/n) * sum v_j.
double integrate(const GridField& v);

} // namespace ch6
