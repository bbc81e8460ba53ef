#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "toa/grid.hpp"
#include "toa_cli/config.hpp"
#include "toa_cli/report.hpp"

namespace toa::cli {

/// Solves the conjugacy system for every configured pair, writes the solver
/// reports and serialized operators to <out>/derive-operators.txt.
Report cmd_derive(const RunConfig& config);

/// U involution, diagonalization, derivative cross-check, numeric conjugation
/// against the closed forms, [H, T0] = 0 and one-particle leakage.
Report cmd_verify(const RunConfig& config);

/// Eigenfunction density movies for every (tau, branch); one CSV each.
Report cmd_dynamics(const RunConfig& config);

/// [Pi, T-hat] = 0 and [Pi, T0] against its closed form for every pair.
Report cmd_parity(const RunConfig& config);

/// Non-relativistic limit sweep over the configured centres.
Report cmd_nonrel(const RunConfig& config);

/// Smooth compactly supported test spinors (products of exp(-1/(1-u^2))
/// bumps) placed inside [-0.9, 0.9] * p_max, alternating half-lines.
std::vector<SpinorGrid> bump_spinors(const MomentumGrid& grid, std::size_t count);

/// Gaussian test spinors that decay well inside the grid.
std::vector<SpinorGrid> gaussian_spinors(const MomentumGrid& grid, const PhysParams& params);

/// Parses argv, runs the subcommand, prints the report to `out`, writes
/// <out>/<command>-report.json. Returns 0 if every check passed, 1 if any
/// failed, 2 on configuration or usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace toa::cli
