// ch6_main.cpp - command-line driver for the state, sensitivity and control solvers
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ch6/run.hpp"

namespace {

constexpr const char* kVersion = "ch6 0.1.0";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral solver and adjoint-based optimal control for the "
                 "sixth-order Cahn-Hilliard system with a mass-regulating source"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path;
    int directions = -1;
    double eps = -1.0;

    auto add_config = [&config_path](CLI::App* cmd) {
        cmd->add_option("config", config_path, "run configuration (INI)")->required();
    };

    CLI::App* sim = app.add_subcommand("simulate", "integrate the state system");
    add_config(sim);
    CLI::App* opt = app.add_subcommand("optimize", "projected-gradient tracking control");
    add_config(opt);
    CLI::App* gc = app.add_subcommand("gradient-check", "adjoint gradient vs finite differences");
    add_config(gc);
    gc->add_option("--directions", directions, "number of random directions");
    gc->add_option("--eps", eps, "finite-difference step");
    CLI::App* tc = app.add_subcommand("taylor-check", "quadratic-remainder ratio report");
    add_config(tc);
    CLI::App* diag = app.add_subcommand("diagnose", "mass-ODE and energy-identity report");
    add_config(diag);
    CLI::App* vp = app.add_subcommand("validate-potential", "potential assumption report");
    add_config(vp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const ch6::RunConfig cfg = ch6::parse_config(config_path);
        if (sim->parsed())
            return ch6::run::simulate_cmd(cfg, std::cout);
        if (opt->parsed())
            return ch6::run::optimize_cmd(cfg, std::cout);
        if (gc->parsed())
            return ch6::run::gradient_check_cmd(cfg,
                                                directions > 0 ? directions
                                                               : cfg.gradcheck_directions,
                                                eps > 0.0 ? eps : cfg.gradcheck_eps, std::cout);
        if (tc->parsed())
            return ch6::run::taylor_check_cmd(cfg, std::cout);
        if (diag->parsed())
            return ch6::run::diagnose_cmd(cfg, std::cout);
        if (vp->parsed())
            return ch6::run::validate_potential_cmd(cfg, std::cout);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const ch6::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const ch6::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ch6::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const ch6::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
