// run.hpp - command implementations shared by the CLI and the tests
#pragma once

#include <iosfwd>
#include <string>

#include "ch6/config.hpp"

namespace ch6::run {

// Exit-code contract: 0 success, 1 check failure, 2 usage/config error
// (raised as ConfigError/IoError), 3 solver blow-up (raised as SolverError).
int simulate_cmd(const RunConfig& cfg, std::ostream& log);
int optimize_cmd(const RunConfig& cfg, std::ostream& log);
int gradient_check_cmd(const RunConfig& cfg, int directions, double eps, std::ostream& log);
int taylor_check_cmd(const RunConfig& cfg, std::ostream& log);
int diagnose_cmd(const RunConfig& cfg, std::ostream& log);
int validate_potential_cmd(const RunConfig& cfg, std::ostream& log);

// CSV renderings (17 significant digits, deterministic).
std::string diagnostics_csv(const StateTrajectory& traj);
std::string iterations_csv(const OptimizeResult& result);

} // namespace ch6::run
