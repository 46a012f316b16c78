// grid_impl.hpp - internal grid tables shared by the transform code
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ch6/grid.hpp"

namespace ch6 {

struct AxisTransform {
    int modes = 1;
    int nodes_count = 1;
    std::vector<double> nodes;   // midpoint collocation points
    std::vector<double> synth;   // nodes_count x modes, row-major
    std::vector<double> analyze; // modes x nodes_count, row-major (exact inverse)
};

struct Grid::Impl {
    int dim = 0;
    std::array<double, 3> lengths{1.0, 1.0, 1.0};
    std::array<int, 3> modes{1, 1, 1};
    double volume = 1.0;
    std::size_t mode_count = 1;
    std::vector<double> eigenvalues;
    std::array<AxisTransform, 3> axes;        // collocation transform
    std::array<AxisTransform, 3> padded_axes; // 3/2-rule transform
};

} // namespace ch6
