// config.hpp - INI-style run configuration, validation and manifest
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ch6/control.hpp"
#include "ch6/state.hpp"

namespace ch6 {

// Source of a field named in the config file:
//   zero | constant:<v> | cosine:<amp>,<k1>[,<k2>,<k3>] |
//   random:<amp>,<seed> | file:<path> | none
struct FieldSource {
    enum class Kind { none, zero, constant, cosine, random, file };
    Kind kind = Kind::none;
    double value = 0.0;           // constant / amplitude
    std::vector<int> mode{0, 0, 0};
    std::uint64_t seed = 0;
    std::string path;

    static FieldSource parse(const std::string& text, const std::string& key);
    std::string render() const;
    SpectralField realize_spectral(const Grid& grid) const; // throws on none
    GridField realize_nodal(const Grid& grid) const;
};

// Scalar-or-file bound for the admissible box.
struct BoundSource {
    bool is_file = false;
    double value = 0.0;
    std::string path;

    static BoundSource parse(const std::string& text, const std::string& key);
    std::string render() const;
};

struct RunConfig {
    // [grid]
    int dim = 1;
    std::vector<double> lengths;
    std::vector<int> modes;
    // [model]
    double sigma = 1.0;
    double nu = 0.0;
    std::string potential_kind = "quartic"; // quartic | polynomial | linear-test
    double lambda = 1.0;
    std::vector<double> coefficients; // polynomial F coefficients, ascending
    bool test_mode = false;
    // [time]
    double T = 1.0;
    double dt = 1e-3;
    double stab_a = 2.0;
    double stab_b = 2.0;
    bool dealias = false;
    // [init]
    FieldSource phi0;
    // [control]
    FieldSource u;
    double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0;
    BoundSource u_min, u_max;
    FieldSource phi_Q;
    FieldSource phi_Omega;
    // [optimize]
    int max_iters = 100;
    double step0 = 1.0;
    double armijo_c1 = 1e-4;
    double shrink = 0.5;
    double tol = 1e-4;
    int gradcheck_directions = 5;
    double gradcheck_eps = 1e-3;
    double gradcheck_tol = 1e-2;
    std::vector<double> taylor_eps{1e-1, 3e-2, 1e-2};
    std::uint64_t check_seed = 1234;
    // [io]
    std::string output_dir = "out";
    int snapshot_stride = 10;

    std::set<std::string> defaulted; // keys the parser filled with defaults

    Grid make_grid() const;
    ModelParams make_params() const;
    StepperConfig make_stepper() const;
    OptimizeOptions make_optimize() const;
    BoxConstraints make_box(const Grid& grid) const;
    CostConfig make_cost(const Grid& grid, int steps) const;
    SpectralField realize_phi0(const Grid& grid) const;
    ControlSchedule realize_control(const Grid& grid) const;

    // Full INI rendering; applied defaults are annotated. Reparsing the
    // manifest reproduces this config.
    std::string manifest() const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

} // namespace ch6
