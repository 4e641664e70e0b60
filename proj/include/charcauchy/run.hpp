#pragma once

#include <string>

#include "charcauchy/config.hpp"

namespace charcauchy {

// Library entry points behind the CLI subcommands.  Each writes its outputs
// under out_dir and returns the process exit code: 0 on success, 1 when a
// configured tolerance fails.
int run_solve(const RunConfig& cfg, const std::string& out_dir);
int run_verify(const RunConfig& cfg, const std::string& out_dir);
int run_expansion(const RunConfig& cfg, const std::string& out_dir);
int run_converge(const RunConfig& cfg, const std::string& out_dir);

// Bundled convergence problems (also used by the acceptance suite).
double converge_error(const std::string& problem, SolvePath path, double h);

}  // namespace charcauchy
