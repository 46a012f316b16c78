// field.hpp - spectral / nodal field representations and the transform pair
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ch6/grid.hpp"

namespace ch6 {

// Coefficients of a scalar field in the orthonormal cosine eigenbasis.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(Grid grid); // zero field
    SpectralField(Grid grid, std::vector<double> coeffs);

    const Grid& grid() const { return grid_; }
    std::span<const double> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }
    double operator[](std::size_t k) const { return coeffs_[k]; }
    double& operator[](std::size_t k) { return coeffs_[k]; }
    std::size_t size() const { return coeffs_.size(); }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);

private:
    Grid grid_;
    std::vector<double> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// y += a*x
void axpy(double a, const SpectralField& x, SpectralField& y);

// Nodal values on the collocation grid, flat row-major (axis 0 slowest).
class GridField {
public:
    GridField() = default;
    explicit GridField(Grid grid); // zero field
    GridField(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t j) const { return values_[j]; }
    double& operator[](std::size_t j) { return values_[j]; }
    std::size_t size() const { return values_.size(); }

    GridField& operator+=(const GridField& other);
    GridField& operator-=(const GridField& other);
    GridField& operator*=(double s);

private:
    Grid grid_;
    std::vector<double> values_;
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(double s, GridField a);
void axpy(double a, const GridField& x, GridField& y);

// Transform pair (mutually inverse; rejects non-finite input).
SpectralField to_spectral(const GridField& nodal);
GridField to_nodal(const SpectralField& spectral);

// Pseudo-spectral evaluation of nonlinear terms: synthesize, act nodally,
// analyze back to the first N modes. With dealias = true the nodal work
// happens on a 3/2-padded midpoint grid.
SpectralField nodal_map(const SpectralField& a,
                        const std::function<double(double)>& fn, bool dealias = false);
SpectralField nodal_product(const SpectralField& a, const SpectralField& b,
                            bool dealias = false);

// Field sampled from a nodal function of the coordinates.
GridField sample(const Grid& grid, const std::function<double(std::span<const double>)>& fn);

// Deterministic smooth random field: coefficient of multi-index k is
// amplitude * u_k / (1 + omega_k)^2 with u_k uniform in [-1,1] derived from
// (seed, k) by a splitmix64 hash; identical on every platform.
SpectralField random_smooth_field(const Grid& grid, double amplitude, std::uint64_t seed);

bool all_finite(std::span<const double> values);

} // namespace ch6
