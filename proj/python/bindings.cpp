// bindings.cpp - ch6control python module: grids, fields, solvers, control
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ch6/config.hpp"
#include "ch6/control.hpp"
#include "ch6/field_io.hpp"
#include "ch6/run.hpp"
#include "ch6/sensitivity.hpp"

namespace py = pybind11;
using namespace ch6;

namespace {

py::array_t<double> to_array(std::span<const double> data) {
    py::array_t<double> out(static_cast<py::ssize_t>(data.size()));
    std::copy(data.begin(), data.end(), out.mutable_data());
    return out;
}

std::vector<double> from_array(const py::array_t<double>& arr) {
    py::buffer_info info = arr.request();
    const double* p = static_cast<const double*>(info.ptr);
    return std::vector<double>(p, p + info.size);
}

Grid make_grid(int dim, std::vector<double> lengths, std::vector<int> modes) {
    return Grid::make(dim, lengths, modes);
}

} // namespace

PYBIND11_MODULE(ch6control, m) {
    m.doc() = "Pseudo-spectral solver and adjoint-based optimal control for the "
              "sixth-order Cahn-Hilliard system with a mass-regulating source";

    py::register_exception<Error>(m, "Ch6Error");

    py::class_<Grid>(m, "Grid")
        .def(py::init(&make_grid), py::arg("dim"), py::arg("lengths"), py::arg("modes"))
        .def_property_readonly("dim", &Grid::dim)
        .def_property_readonly("mode_count", &Grid::mode_count)
        .def_property_readonly("volume", &Grid::volume)
        .def("length", &Grid::length)
        .def("modes", &Grid::modes)
        .def("eigenvalues", [](const Grid& g) { return to_array(g.eigenvalues()); })
        .def("nodes", [](const Grid& g, int axis) { return to_array(g.nodes(axis)); })
        .def("__eq__", [](const Grid& a, const Grid& b) { return a == b; });

    py::class_<SpectralField>(m, "SpectralField")
        .def(py::init<Grid>())
        .def(py::init([](Grid g, const py::array_t<double>& coeffs) {
                 return SpectralField(std::move(g), from_array(coeffs));
             }),
             py::arg("grid"), py::arg("coeffs"))
        .def_property_readonly("grid", &SpectralField::grid)
        .def("coeffs", [](const SpectralField& f) { return to_array(f.coeffs()); })
        .def("__add__", [](const SpectralField& a, const SpectralField& b) { return a + b; })
        .def("__sub__", [](const SpectralField& a, const SpectralField& b) { return a - b; })
        .def("__rmul__", [](const SpectralField& a, double s) { return s * a; });

    py::class_<GridField>(m, "GridField")
        .def(py::init<Grid>())
        .def(py::init([](Grid g, const py::array_t<double>& values) {
                 return GridField(std::move(g), from_array(values));
             }),
             py::arg("grid"), py::arg("values"))
        .def_property_readonly("grid", &GridField::grid)
        .def("values", [](const GridField& f) { return to_array(f.values()); })
        .def("__add__", [](const GridField& a, const GridField& b) { return a + b; })
        .def("__sub__", [](const GridField& a, const GridField& b) { return a - b; })
        .def("__rmul__", [](const GridField& a, double s) { return s * a; });

    m.def("to_spectral", &to_spectral);
    m.def("to_nodal", &to_nodal);
    m.def("laplacian", &laplacian, py::arg("field"), py::arg("power") = 1);
    m.def("neumann_inverse", &neumann_inverse, py::arg("field"), py::arg("auto_center") = false);
    m.def("mean", py::overload_cast<const SpectralField&>(&mean));
    m.def("mean", py::overload_cast<const GridField&>(&mean));
    m.def("inner_h",
          py::overload_cast<const SpectralField&, const SpectralField&>(&inner_h));
    m.def("inner_h", py::overload_cast<const GridField&, const GridField&>(&inner_h));
    m.def("random_smooth_field", &random_smooth_field, py::arg("grid"), py::arg("amplitude"),
          py::arg("seed"));

    py::enum_<NormKind>(m, "NormKind")
        .value("H", NormKind::H)
        .value("V", NormKind::V)
        .value("Vstar", NormKind::Vstar)
        .value("Linf", NormKind::Linf);
    m.def("norm", py::overload_cast<const SpectralField&, NormKind>(&norm), py::arg("field"),
          py::arg("kind") = NormKind::H);
    m.def("norm", py::overload_cast<const GridField&, NormKind>(&norm), py::arg("field"),
          py::arg("kind") = NormKind::H);

    py::enum_<PotentialKind>(m, "PotentialKind")
        .value("quartic", PotentialKind::quartic)
        .value("polynomial", PotentialKind::polynomial)
        .value("linear_test", PotentialKind::linear_test);

    py::class_<Potential>(m, "Potential")
        .def_static("quartic", &Potential::quartic, py::arg("lam") = 1.0)
        .def_static("polynomial", &Potential::polynomial, py::arg("coeffs"), py::arg("lam"))
        .def_static("linear_test", &Potential::linear_test)
        .def_property_readonly("kind", &Potential::kind)
        .def_property_readonly("lam", &Potential::lambda)
        .def("F", &Potential::F)
        .def("f", &Potential::f)
        .def("f1", &Potential::f1)
        .def("f2", &Potential::f2)
        .def("f3", &Potential::f3)
        .def("beta", &Potential::beta);

    m.def("eval_gamma", &eval_gamma);
    m.def("eval_g", &eval_g);
    m.def("validate_assumptions", [](const Potential& pot, double radius) {
        ValidationReport rep = validate_assumptions(pot, radius);
        py::dict out;
        out["all_pass"] = rep.all_pass;
        out["verification_only"] = rep.verification_only;
        out["fitted_c_beta"] = rep.fitted_c_beta;
        py::list checks;
        for (const auto& c : rep.checks) {
            py::dict d;
            d["name"] = c.name;
            d["pass"] = c.pass;
            d["detail"] = c.detail;
            checks.append(d);
        }
        out["checks"] = checks;
        return out;
    }, py::arg("potential"), py::arg("sample_radius") = 10.0);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("sigma", &ModelParams::sigma)
        .def_readwrite("nu", &ModelParams::nu)
        .def_readwrite("potential", &ModelParams::potential);

    py::class_<StepperConfig>(m, "StepperConfig")
        .def(py::init<>())
        .def_readwrite("dt", &StepperConfig::dt)
        .def_readwrite("stab_a", &StepperConfig::stab_a)
        .def_readwrite("stab_b", &StepperConfig::stab_b)
        .def_readwrite("dealias", &StepperConfig::dealias)
        .def_readwrite("blowup_bound", &StepperConfig::blowup_bound);

    py::class_<ControlSchedule>(m, "ControlSchedule")
        .def_static("zero", &ControlSchedule::zero)
        .def_static("constant", &ControlSchedule::constant)
        .def_static("per_step", &ControlSchedule::per_step)
        .def("at", &ControlSchedule::at, py::return_value_policy::copy)
        .def_property_readonly("steps", &ControlSchedule::steps);

    py::class_<StateTrajectory>(m, "StateTrajectory")
        .def_property_readonly("steps", &StateTrajectory::steps)
        .def("times", [](const StateTrajectory& t) { return to_array(t.times()); })
        .def("phi", &StateTrajectory::phi, py::return_value_policy::copy)
        .def("w", &StateTrajectory::w)
        .def("mu", &StateTrajectory::mu)
        .def("means",
             [](const StateTrajectory& t) {
                 std::vector<double> out;
                 for (const auto& d : t.diagnostics())
                     out.push_back(d.mean);
                 return out;
             })
        .def("energies", [](const StateTrajectory& t) {
            std::vector<double> out;
            for (const auto& d : t.diagnostics())
                out.push_back(d.energy);
            return out;
        });

    m.def("w_field", &w_field, py::arg("phi"), py::arg("params"), py::arg("dealias") = false);
    m.def("chemical_potential", &chemical_potential, py::arg("phi"), py::arg("params"),
          py::arg("dealias") = false);
    m.def("step", &step, py::arg("phi"), py::arg("u"), py::arg("params"), py::arg("cfg"),
          py::arg("t_now") = 0.0);
    m.def("simulate", &simulate, py::arg("phi0"), py::arg("u"), py::arg("params"),
          py::arg("cfg"), py::arg("T"));
    m.def("energy", &energy);
    m.def("mass_ode_reference",
          py::overload_cast<double, double, double, double>(&mass_ode_reference));
    m.def("residual_energy_identity", [](const StateTrajectory& traj) {
        EnergyIdentityResult r = residual_energy_identity(traj);
        return py::make_tuple(r.residuals, r.max_abs);
    });

    py::class_<LinTrajectory>(m, "LinTrajectory")
        .def_readonly("times", &LinTrajectory::times)
        .def("psi", [](const LinTrajectory& t, int i) { return t.psi.at(i); })
        .def("eta", [](const LinTrajectory& t, int i) { return t.eta.at(i); })
        .def("omega", [](const LinTrajectory& t, int i) { return t.omega.at(i); });

    py::class_<AdjTrajectory>(m, "AdjTrajectory")
        .def_readonly("times", &AdjTrajectory::times)
        .def("p", [](const AdjTrajectory& t, int i) { return t.p.at(i); })
        .def("q", [](const AdjTrajectory& t, int i) { return t.q.at(i); })
        .def("r", [](const AdjTrajectory& t, int i) { return t.r.at(i); });

    m.def("solve_linearized", &solve_linearized);
    m.def("solve_adjoint", &solve_adjoint);
    m.def("taylor_remainder_ratios",
          [](const SpectralField& phi0, const ControlSchedule& u, const ControlSchedule& h,
             std::vector<double> eps, const ModelParams& params, const StepperConfig& cfg,
             double T) { return taylor_remainder_ratios(phi0, u, h, eps, params, cfg, T); });

    py::class_<TargetSchedule>(m, "TargetSchedule")
        .def(py::init<>())
        .def_static("constant", &TargetSchedule::constant)
        .def_static("per_step", &TargetSchedule::per_step);

    py::class_<CostConfig>(m, "CostConfig")
        .def(py::init<>())
        .def_readwrite("alpha1", &CostConfig::alpha1)
        .def_readwrite("alpha2", &CostConfig::alpha2)
        .def_readwrite("alpha3", &CostConfig::alpha3)
        .def_readwrite("phi_Q", &CostConfig::phi_Q)
        .def_readwrite("phi_Omega", &CostConfig::phi_Omega);

    py::class_<BoxConstraints>(m, "BoxConstraints")
        .def(py::init([](double lo, double hi) { return BoxConstraints(lo, hi); }))
        .def(py::init([](GridField lo, GridField hi) {
            return BoxConstraints(std::move(lo), std::move(hi));
        }))
        .def_static("unbounded", &BoxConstraints::unbounded);

    m.def("cost", &cost);
    m.def("reduced_gradient", &reduced_gradient);
    m.def("project_box", &project_box);
    m.def("stationarity_residual", &stationarity_residual);

    py::enum_<Termination>(m, "Termination")
        .value("stationarity", Termination::stationarity)
        .value("max_iters", Termination::max_iters)
        .value("step_collapse", Termination::step_collapse);

    py::class_<OptimizeOptions>(m, "OptimizeOptions")
        .def(py::init<>())
        .def_readwrite("max_iters", &OptimizeOptions::max_iters)
        .def_readwrite("step0", &OptimizeOptions::step0)
        .def_readwrite("armijo_c1", &OptimizeOptions::armijo_c1)
        .def_readwrite("shrink", &OptimizeOptions::shrink)
        .def_readwrite("tol", &OptimizeOptions::tol);

    py::class_<OptimizeResult>(m, "OptimizeResult")
        .def_readonly("j_history", &OptimizeResult::j_history)
        .def_readonly("stationarity_history", &OptimizeResult::stationarity_history)
        .def_readonly("step_history", &OptimizeResult::step_history)
        .def_readonly("u_star", &OptimizeResult::u_star)
        .def_readonly("iterations", &OptimizeResult::iterations)
        .def_readonly("reason", &OptimizeResult::reason)
        .def_property_readonly("state",
                               [](const OptimizeResult& r) { return r.state; })
        .def_property_readonly("adjoint",
                               [](const OptimizeResult& r) { return r.adjoint; });

    m.def("optimize", &optimize, py::arg("phi0"), py::arg("u0"), py::arg("params"),
          py::arg("cfg"), py::arg("T"), py::arg("cost"), py::arg("box"), py::arg("opts"));
    m.def("gradient_check", [](const SpectralField& phi0, const ControlSchedule& u,
                               const ModelParams& params, const StepperConfig& cfg, double T,
                               const CostConfig& cc, int directions, double eps,
                               std::uint64_t seed) {
        GradientCheckResult r = gradient_check(phi0, u, params, cfg, T, cc, directions, eps, seed);
        py::dict out;
        out["adjoint"] = r.adjoint_derivatives;
        out["fd"] = r.fd_derivatives;
        out["rel_errors"] = r.rel_errors;
        out["max_rel_error"] = r.max_rel_error;
        return out;
    });

    m.def("write_field",
          py::overload_cast<const std::string&, const SpectralField&>(&write_field));
    m.def("write_field", py::overload_cast<const std::string&, const GridField&>(&write_field));
    m.def("read_spectral_field", &read_spectral_field);
    m.def("read_nodal_field", &read_nodal_field);

    m.def("parse_config", &parse_config);
    py::class_<RunConfig>(m, "RunConfig")
        .def_readonly("T", &RunConfig::T)
        .def_readonly("dt", &RunConfig::dt)
        .def_readonly("sigma", &RunConfig::sigma)
        .def_readonly("nu", &RunConfig::nu)
        .def("manifest", &RunConfig::manifest)
        .def("make_grid", &RunConfig::make_grid)
        .def("make_params", &RunConfig::make_params)
        .def("make_stepper", &RunConfig::make_stepper);
}
