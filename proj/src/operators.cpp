// operators.cpp - Laplacian powers, inverse Neumann operator, means and norms
#include "ch6/operators.hpp"

#include <algorithm>
#include <cmath>

#include "ch6/errors.hpp"

namespace ch6 {

SpectralField laplacian(const SpectralField& v, int power) {
    if (power < 1 || power > 3)
        throw Error("laplacian power must be 1, 2 or 3");
    SpectralField out = v;
    const auto omega = v.grid().eigenvalues();
    for (std::size_t k = 0; k < out.size(); ++k) {
        double factor = -omega[k];
        for (int p = 1; p < power; ++p)
            factor *= -omega[k];
        out[k] *= factor;
    }
    return out;
}

SpectralField neumann_inverse(const SpectralField& zeta, bool auto_center) {
    SpectralField out = zeta;
    if (!auto_center) {
        const double nrm = norm(zeta, NormKind::H);
        if (std::abs(zeta[0]) > 1e-10 * std::max(nrm, 1e-300) && zeta[0] != 0.0)
            throw Error("neumann_inverse: input has nonzero mean (pass auto_center to recenter)");
    }
    out[0] = 0.0;
    const auto omega = zeta.grid().eigenvalues();
    for (std::size_t k = 1; k < out.size(); ++k)
        out[k] /= omega[k];
    return out;
}

double mean(const SpectralField& v) {
    // constant eigenfunction is 1/sqrt(|Omega|)
    return v[0] / std::sqrt(v.grid().volume());
}

double mean(const GridField& v) {
    return integrate(v) / v.grid().volume();
}

double integrate(const GridField& v) {
    const double w = v.grid().volume() / static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v.values())
        sum += x;
    return w * sum;
}

double inner_h(const SpectralField& a, const SpectralField& b) {
    if (a.grid() != b.grid())
        throw Error("inner_h: grid mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        sum += a[k] * b[k];
    return sum;
}

double inner_h(const GridField& a, const GridField& b) {
    if (a.grid() != b.grid())
        throw Error("inner_h: grid mismatch");
    const double w = a.grid().volume() / static_cast<double>(a.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        sum += a[j] * b[j];
    return w * sum;
}

double norm(const SpectralField& v, NormKind kind) {
    const auto omega = v.grid().eigenvalues();
    switch (kind) {
    case NormKind::H: {
        double s = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k)
            s += v[k] * v[k];
        return std::sqrt(s);
    }
    case NormKind::V: {
        // |grad v|^2 = sum_k omega_k c_k^2 by the eigenrelation
        double s = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k)
            s += (1.0 + omega[k]) * v[k] * v[k];
        return std::sqrt(s);
    }
    case NormKind::Vstar: {
        double s = v[0] * v[0] / v.grid().volume(); // |mean|^2
        for (std::size_t k = 1; k < v.size(); ++k)
            s += v[k] * v[k] / omega[k];
        return std::sqrt(s);
    }
    case NormKind::Linf: {
        const GridField nodal = to_nodal(v);
        double m = 0.0;
        for (double x : nodal.values())
            m = std::max(m, std::abs(x));
        return m;
    }
    }
    throw Error("norm: unknown kind");
}

double norm(const GridField& v, NormKind kind) {
    if (kind == NormKind::Linf) {
        double m = 0.0;
        for (double x : v.values())
            m = std::max(m, std::abs(x));
        return m;
    }
    if (kind == NormKind::H)
        return std::sqrt(inner_h(v, v));
    return norm(to_spectral(v), kind);
}

} // namespace ch6
