#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qnls/config.hpp"
#include "qnls/solver.hpp"

namespace qnls {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int failed = 2;
}  // namespace exit_code

const std::vector<std::string>& subcommands();

/// Grid, potential, exponent and solver settings from a validated config.
/// Throws ConfigError for bad values and std::invalid_argument for an inadmissible p.
SolveConfig solve_config_from(const Config& cfg);
PotentialModel potential_from(const Config& cfg);
HypothesisOptions hypothesis_options_from(const Config& cfg);

/// Runs one subcommand, writes its files under output.dir and prints one summary line to `out`.
/// Returns 0 on convergence or pass, 2 on non-convergence or failed checks, 1 on config errors.
int run_command(const std::string& subcommand, const Config& cfg, std::ostream& out, std::ostream& err);

}  // namespace qnls
