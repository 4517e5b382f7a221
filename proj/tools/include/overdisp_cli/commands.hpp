#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "overdisp_cli/config.hpp"

namespace overdisp::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitSolver = 3,
    kExitUnsupportedOrder = 4,
};

/// Regime constants of the configured model (all three regimes).
/// CSV columns: service, theta_star, chi_plus, vbar2, sigma_plus_sq,
/// theta_circ, chi_circ, sigma_circ_sq, tau_star, chi_minus, wbar1,
/// sigma_minus_sq, c, v1, w2.
std::string cmd_constants(const RunConfig& cfg);

/// CSV columns: f, n, regime, m, prefactor, exponent, xi, log_xi.
std::string cmd_approximate(const RunConfig& cfg);

/// CSV columns: f, n, method, samples, grid_cells, seed, estimate,
/// std_error, ci_low, ci_high, xi_approx, ratio.
std::string cmd_simulate(const RunConfig& cfg);

/// Regenerates table 1, 2, 3 or 4. Tables 1 and 3 hold the constants per
/// service row; tables 2 and 4 hold xi per (service, f) with an n row.
std::string cmd_table(int table, OutputFormat format, int precision);

/// Full command-line entry point; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace overdisp::cli
