// grid.cpp - eigenbasis setup and per-axis cosine transform tables
#include "ch6/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ch6/errors.hpp"
#include "grid_impl.hpp"

namespace ch6 {

namespace {

// Per-axis tables for an N-mode basis evaluated on an M-point midpoint grid
// (M = N for the collocation grid, M = ceil(3N/2) for the padded one).
// basis_k(x) = n_k cos(k pi x / L), n_0 = sqrt(1/L), n_k = sqrt(2/L).
AxisTransform make_axis(int n_modes, int n_nodes, double length) {
    AxisTransform t;
    t.modes = n_modes;
    t.nodes_count = n_nodes;
    t.nodes.resize(n_nodes);
    for (int j = 0; j < n_nodes; ++j)
        t.nodes[j] = (j + 0.5) * length / n_nodes;

    t.synth.resize(static_cast<std::size_t>(n_nodes) * n_modes);
    t.analyze.resize(static_cast<std::size_t>(n_modes) * n_nodes);
    const double w = length / n_nodes; // midpoint quadrature weight
    for (int k = 0; k < n_modes; ++k) {
        const double nk = std::sqrt((k == 0 ? 1.0 : 2.0) / length);
        for (int j = 0; j < n_nodes; ++j) {
            const double phase = std::numbers::pi * k * (j + 0.5) / n_nodes;
            const double b = nk * std::cos(phase);
            t.synth[static_cast<std::size_t>(j) * n_modes + k] = b;
            t.analyze[static_cast<std::size_t>(k) * n_nodes + j] = w * b;
        }
    }
    return t;
}

} // namespace

Grid Grid::make(int dim, std::span<const double> lengths, std::span<const int> modes) {
    if (dim < 1 || dim > 3)
        throw Error("grid dim must be 1, 2 or 3, got " + std::to_string(dim));
    if (static_cast<int>(lengths.size()) != dim || static_cast<int>(modes.size()) != dim)
        throw Error("grid needs one length and one mode count per axis");

    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->volume = 1.0;
    impl->mode_count = 1;
    for (int a = 0; a < dim; ++a) {
        if (!(lengths[a] > 0.0))
            throw Error("grid length on axis " + std::to_string(a) + " must be > 0");
        if (modes[a] < 2)
            throw Error("grid mode count on axis " + std::to_string(a) + " must be >= 2");
        impl->lengths[a] = lengths[a];
        impl->modes[a] = modes[a];
        impl->volume *= lengths[a];
        impl->mode_count *= static_cast<std::size_t>(modes[a]);
    }
    for (int a = dim; a < 3; ++a) {
        impl->lengths[a] = 1.0;
        impl->modes[a] = 1;
    }

    for (int a = 0; a < dim; ++a) {
        const int n = impl->modes[a];
        impl->axes[a] = make_axis(n, n, impl->lengths[a]);
        impl->padded_axes[a] = make_axis(n, (3 * n + 1) / 2, impl->lengths[a]);
    }

    // omega_k = sum_a (pi k_a / L_a)^2, flat row-major with axis 0 slowest
    impl->eigenvalues.resize(impl->mode_count);
    for (std::size_t flat = 0; flat < impl->mode_count; ++flat) {
        std::size_t rem = flat;
        double omega = 0.0;
        for (int a = dim - 1; a >= 0; --a) {
            const int k = static_cast<int>(rem % impl->modes[a]);
            rem /= impl->modes[a];
            const double kappa = std::numbers::pi * k / impl->lengths[a];
            omega += kappa * kappa;
        }
        impl->eigenvalues[flat] = omega;
    }

    Grid g;
    g.impl_ = std::move(impl);
    return g;
}

int Grid::dim() const { return impl_->dim; }
double Grid::length(int axis) const { return impl_->lengths[axis]; }
int Grid::modes(int axis) const { return impl_->modes[axis]; }
std::size_t Grid::mode_count() const { return impl_->mode_count; }
double Grid::volume() const { return impl_->volume; }
std::span<const double> Grid::eigenvalues() const { return impl_->eigenvalues; }
std::span<const double> Grid::nodes(int axis) const { return impl_->axes[axis].nodes; }

std::size_t Grid::flatten(std::array<int, 3> multi) const {
    std::size_t flat = 0;
    for (int a = 0; a < impl_->dim; ++a)
        flat = flat * impl_->modes[a] + static_cast<std::size_t>(multi[a]);
    return flat;
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const {
    std::array<int, 3> multi{0, 0, 0};
    for (int a = impl_->dim - 1; a >= 0; --a) {
        multi[a] = static_cast<int>(flat % impl_->modes[a]);
        flat /= impl_->modes[a];
    }
    return multi;
}

bool Grid::operator==(const Grid& other) const {
    if (impl_ == other.impl_)
        return true;
    if (!impl_ || !other.impl_)
        return false;
    if (impl_->dim != other.impl_->dim)
        return false;
    for (int a = 0; a < impl_->dim; ++a)
        if (impl_->lengths[a] != other.impl_->lengths[a] || impl_->modes[a] != other.impl_->modes[a])
            return false;
    return true;
}

} // namespace ch6
