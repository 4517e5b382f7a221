#pragma once

#include "overdisp/functionals.hpp"
#include "overdisp/model.hpp"
#include "overdisp/roots.hpp"

namespace overdisp {

/// Limits for psi_n -> 0 (phi_n superlinear).
struct FastConstants {
    double theta_star = 0.0;
    double v1 = 0.0;
    double vbar2 = 0.0;
    double chi_plus = 0.0;
    double sigma_plus_sq = 0.0;
};

/// Limits for psi_n -> infinity (phi_n sublinear).
struct SlowConstants {
    double tau_star = 0.0;
    double w2 = 0.0;
    double wbar1 = 0.0;
    double chi_minus = 0.0;
    double sigma_minus_sq = 0.0;
};

/// phi_n = n, psi_n = 1: the twist does not depend on n.
struct BalancedConstants {
    double theta_circ = 0.0;
    double chi_circ = 0.0;
    double sigma_circ_sq = 0.0;
};

FastConstants fast_constants(const Model& model);
SlowConstants slow_constants(const Model& model, const RootConfig& config = {});
BalancedConstants balanced_constants(const Model& model, const RootConfig& config = {});

/// Solution of gamma_n'(theta) = u n.
///
/// theta = base + offset, where base is theta* in the fast regime and 0
/// otherwise. The offset is solved for directly, so theta_n - theta* keeps
/// full relative precision even when it is far below the resolution of theta.
struct TwistSolution {
    double theta = 0.0;
    double base = 0.0;
    double offset = 0.0;
    /// psi_n (e^theta - 1), the argument handed to beta.
    double eta = 0.0;
};

TwistSolution solve_theta_n(const Model& model, const RootConfig& config = {});

/// Var_Q N_n = gamma_n''(theta).
double variance_q(const Model& model, double theta);

}  // namespace overdisp
