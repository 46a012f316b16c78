// field.cpp - transforms between nodal and spectral representations
#include "ch6/field.hpp"

#include <cmath>
#include <cstring>

#include "ch6/errors.hpp"
#include "grid_impl.hpp"

namespace ch6 {

namespace {

void check_same_grid(const Grid& a, const Grid& b) {
    if (a != b)
        throw Error("fields live on different grids");
}

// Apply a (rows x cols) matrix along one axis of a flat row-major tensor.
// shape[] holds the extent of each axis of `in`; the chosen axis must have
// extent cols and is replaced by rows in the output. Plain loops with a
// fixed summation order keep results bit-reproducible.
void apply_axis(const std::vector<double>& mat, int rows, int cols,
                const std::vector<double>& in, std::vector<double>& out,
                std::array<int, 3>& shape, int dim, int axis) {
    std::size_t outer = 1, inner = 1;
    for (int a = 0; a < axis; ++a)
        outer *= static_cast<std::size_t>(shape[a]);
    for (int a = axis + 1; a < dim; ++a)
        inner *= static_cast<std::size_t>(shape[a]);

    out.assign(outer * static_cast<std::size_t>(rows) * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
        const double* in_block = in.data() + o * static_cast<std::size_t>(cols) * inner;
        double* out_block = out.data() + o * static_cast<std::size_t>(rows) * inner;
        for (int r = 0; r < rows; ++r) {
            const double* mrow = mat.data() + static_cast<std::size_t>(r) * cols;
            double* orow = out_block + static_cast<std::size_t>(r) * inner;
            for (int c = 0; c < cols; ++c) {
                const double m = mrow[c];
                const double* irow = in_block + static_cast<std::size_t>(c) * inner;
                for (std::size_t i = 0; i < inner; ++i)
                    orow[i] += m * irow[i];
            }
        }
    }
    shape[axis] = rows;
}

std::vector<double> synthesize(const Grid& grid, std::span<const double> coeffs, bool padded) {
    const auto& impl = grid.impl();
    std::array<int, 3> shape{1, 1, 1};
    for (int a = 0; a < impl.dim; ++a)
        shape[a] = impl.modes[a];
    std::vector<double> cur(coeffs.begin(), coeffs.end());
    std::vector<double> next;
    for (int a = 0; a < impl.dim; ++a) {
        const AxisTransform& t = padded ? impl.padded_axes[a] : impl.axes[a];
        apply_axis(t.synth, t.nodes_count, t.modes, cur, next, shape, impl.dim, a);
        cur.swap(next);
    }
    return cur;
}

std::vector<double> analyze(const Grid& grid, std::vector<double> nodal, bool padded) {
    const auto& impl = grid.impl();
    std::array<int, 3> shape{1, 1, 1};
    for (int a = 0; a < impl.dim; ++a)
        shape[a] = padded ? impl.padded_axes[a].nodes_count : impl.axes[a].nodes_count;
    std::vector<double> next;
    for (int a = 0; a < impl.dim; ++a) {
        const AxisTransform& t = padded ? impl.padded_axes[a] : impl.axes[a];
        apply_axis(t.analyze, t.modes, t.nodes_count, nodal, next, shape, impl.dim, a);
        nodal.swap(next);
    }
    return nodal;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

bool all_finite(std::span<const double> values) {
    for (double v : values)
        if (!std::isfinite(v))
            return false;
    return true;
}

SpectralField::SpectralField(Grid grid)
    : grid_(std::move(grid)), coeffs_(grid_.mode_count(), 0.0) {}

SpectralField::SpectralField(Grid grid, std::vector<double> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.mode_count())
        throw Error("coefficient count does not match grid");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    check_same_grid(grid_, other.grid_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        coeffs_[k] += other.coeffs_[k];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    check_same_grid(grid_, other.grid_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        coeffs_[k] -= other.coeffs_[k];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (double& c : coeffs_)
        c *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

void axpy(double a, const SpectralField& x, SpectralField& y) {
    check_same_grid(x.grid(), y.grid());
    auto xs = x.coeffs();
    auto ys = y.coeffs();
    for (std::size_t k = 0; k < xs.size(); ++k)
        ys[k] += a * xs[k];
}

GridField::GridField(Grid grid)
    : grid_(std::move(grid)), values_(grid_.mode_count(), 0.0) {}

GridField::GridField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.mode_count())
        throw Error("nodal value count does not match grid");
}

GridField& GridField::operator+=(const GridField& other) {
    check_same_grid(grid_, other.grid_);
    for (std::size_t j = 0; j < values_.size(); ++j)
        values_[j] += other.values_[j];
    return *this;
}

GridField& GridField::operator-=(const GridField& other) {
    check_same_grid(grid_, other.grid_);
    for (std::size_t j = 0; j < values_.size(); ++j)
        values_[j] -= other.values_[j];
    return *this;
}

GridField& GridField::operator*=(double s) {
    for (double& v : values_)
        v *= s;
    return *this;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(double s, GridField a) { return a *= s; }

void axpy(double a, const GridField& x, GridField& y) {
    check_same_grid(x.grid(), y.grid());
    auto xs = x.values();
    auto ys = y.values();
    for (std::size_t j = 0; j < xs.size(); ++j)
        ys[j] += a * xs[j];
}

SpectralField to_spectral(const GridField& nodal) {
    if (!all_finite(nodal.values()))
        throw Error("to_spectral: non-finite nodal values");
    std::vector<double> v(nodal.values().begin(), nodal.values().end());
    return SpectralField(nodal.grid(), analyze(nodal.grid(), std::move(v), false));
}

GridField to_nodal(const SpectralField& spectral) {
    if (!all_finite(spectral.coeffs()))
        throw Error("to_nodal: non-finite coefficients");
    return GridField(spectral.grid(), synthesize(spectral.grid(), spectral.coeffs(), false));
}

SpectralField nodal_map(const SpectralField& a, const std::function<double(double)>& fn,
                        bool dealias) {
    std::vector<double> nodal = synthesize(a.grid(), a.coeffs(), dealias);
    for (double& v : nodal)
        v = fn(v);
    return SpectralField(a.grid(), analyze(a.grid(), std::move(nodal), dealias));
}

SpectralField nodal_product(const SpectralField& a, const SpectralField& b, bool dealias) {
    check_same_grid(a.grid(), b.grid());
    std::vector<double> na = synthesize(a.grid(), a.coeffs(), dealias);
    std::vector<double> nb = synthesize(b.grid(), b.coeffs(), dealias);
    for (std::size_t j = 0; j < na.size(); ++j)
        na[j] *= nb[j];
    return SpectralField(a.grid(), analyze(a.grid(), std::move(na), dealias));
}

GridField sample(const Grid& grid, const std::function<double(std::span<const double>)>& fn) {
    GridField out(grid);
    const std::size_t n = grid.mode_count();
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        auto multi = grid.unflatten(j);
        for (int a = 0; a < grid.dim(); ++a)
            x[a] = grid.nodes(a)[multi[a]];
        out[j] = fn(std::span<const double>(x.data(), grid.dim()));
    }
    return out;
}

SpectralField random_smooth_field(const Grid& grid, double amplitude, std::uint64_t seed) {
    SpectralField out(grid);
    const auto omega = grid.eigenvalues();
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::uint64_t h = splitmix64(seed ^ (0x517cc1b727220a95ull * (k + 1)));
        const double u = 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
        const double decay = 1.0 + omega[k];
        out[k] = amplitude * u / (decay * decay);
    }
    return out;
}

} // namespace ch6
