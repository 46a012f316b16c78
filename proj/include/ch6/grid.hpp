// grid.hpp - rectangular domains with the Neumann-Laplacian cosine eigenbasis
#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ch6 {

// Axis-aligned box [0,L_1] x ... x [0,L_d] discretized with N_i cosine modes
// per axis. The eigenfunctions of -Laplace with homogeneous Neumann
// conditions are products of cos(pi k_i x_i / L_i), scaled to be orthonormal
// in L^2; the eigenvalue of multi-index k is
//
//     omega_k = sum_i (pi k_i / L_i)^2,   omega_0 = 0.
//
// The collocation grid is the midpoint grid x_j = (j + 1/2) L / N matching
// the DCT-II/DCT-III pair, on which the first N_i modes are exactly
// orthonormal under midpoint quadrature. Grids are immutable and cheap to
// copy (shared internals).
class Grid {
public:
    Grid() = default;
    static Grid make(int dim, std::span<const double> lengths, std::span<const int> modes);

    bool valid() const { return impl_ != nullptr; }
    int dim() const;
    double length(int axis) const;
    int modes(int axis) const;
    std::size_t mode_count() const; // product over axes
    double volume() const;          // |Omega|

    // Eigenvalues omega_k, flat row-major (axis 0 slowest).
    std::span<const double> eigenvalues() const;
    double eigenvalue(std::size_t flat) const { return eigenvalues()[flat]; }

    // Collocation nodes of one axis.
    std::span<const double> nodes(int axis) const;

    std::size_t flatten(std::array<int, 3> multi) const;
    std::array<int, 3> unflatten(std::size_t flat) const;

    // Two grids are interchangeable iff dim, lengths and modes agree.
    bool operator==(const Grid& other) const;
    bool operator!=(const Grid& other) const { return !(*this == other); }

    struct Impl;
    const Impl& impl() const { return *impl_; }

private:
    std::shared_ptr<const Impl> impl_;
};

} // namespace ch6
