#include "overdisp/twist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "overdisp/errors.hpp"

namespace overdisp {

namespace {

constexpr double kBracketEps = 1e-12;

// Largest admissible beta argument for tau * Fbar(s): theta_dom / Fbar(0).
double tilt_limit(const Model& model) {
    return model.subordinator().domain_limit() / model.service().tail_at_zero();
}

RootResult solve_named(const std::function<double(double)>& residual, double lo, double hi,
                       const RootConfig& config, const char* equation) {
    try {
        return find_root(residual, lo, hi, config);
    } catch (const BracketFailure& e) {
        throw BracketFailure(std::string(equation) + ": " + e.what());
    }
}

bool is_fast(const Model& model) {
    const auto& f = model.scaling().f;
    if (f.exact()) return f.exact()->first > f.exact()->second;
    return f.value() > 1.0;
}

}  // namespace

FastConstants fast_constants(const Model& model) {
    const double u = model.u();
    const double c = model.c();
    if (!(u > c)) throw RarityViolation("fast constants need u > c");
    const auto& sub = model.subordinator();
    const double z1 = z_plus(1, model.service());
    const double z2 = z_plus(2, model.service());
    const double b1 = sub.derivative(1, 0.0);
    const double b2 = sub.derivative(2, 0.0);
    const double excess = u / c - 1.0;

    FastConstants out;
    out.theta_star = std::log(u / c);
    out.v1 = -excess * (b2 / b1) * (z2 / z1);
    out.vbar2 = 0.5 * b2 * excess * excess * z2;
    out.chi_plus = u - c - u * out.theta_star;
    out.sigma_plus_sq = u;
    return out;
}

SlowConstants slow_constants(const Model& model, const RootConfig& config) {
    const double u = model.u();
    const double limit = tilt_limit(model);
    const auto residual = [&](double tau) { return z_minus(1, tau, model) / u - 1.0; };
    const double tau = solve_named(residual, kBracketEps * limit, (1.0 - kBracketEps) * limit,
                                   config, "z_1^-(tau) = u")
                           .x;

    SlowConstants out;
    out.tau_star = tau;
    out.sigma_minus_sq = z_minus(2, tau, model);
    out.w2 = -tau * u / out.sigma_minus_sq - 0.5 * tau * tau;
    out.wbar1 = 0.5 * tau * tau * u;
    out.chi_minus = z_minus(0, tau, model) - tau * u;
    return out;
}

BalancedConstants balanced_constants(const Model& model, const RootConfig& config) {
    const double u = model.u();
    const double limit = tilt_limit(model);
    // e^theta z_1^-(e^theta - 1) = u, written in eta = e^theta - 1.
    const auto residual = [&](double eta) {
        return std::log1p(eta) + std::log(z_minus(1, eta, model) / u);
    };
    const double eta = solve_named(residual, kBracketEps * limit, (1.0 - kBracketEps) * limit,
                                   config, "e^theta z_1^-(e^theta - 1) = u")
                           .x;

    BalancedConstants out;
    out.theta_circ = std::log1p(eta);
    out.chi_circ = z_minus(0, eta, model) - out.theta_circ * u;
    const double e2 = (1.0 + eta) * (1.0 + eta);
    if (model.subordinator().as_gamma() != nullptr) {
        out.sigma_circ_sq = -u / eta + e2 * z_cap(eta, model);
    } else {
        out.sigma_circ_sq = e2 * z_minus(2, eta, model) + u;
    }
    return out;
}

TwistSolution solve_theta_n(const Model& model, const RootConfig& config) {
    const double u = model.u();
    const double psi = model.psi();
    const double limit = tilt_limit(model);
    TwistSolution out;

    if (is_fast(model)) {
        // theta = theta* + delta. With e^{theta*} z_1^-(0) = u the first-order
        // condition reads delta + log(z_1^-(tau) / z_1^-(0)) = 0, and
        // delta in [-theta*, 0] because z_1^- is increasing.
        const double theta_star = std::log(u / model.c());
        const double z10 = z_minus(1, 0.0, model);
        const double theta_max = std::log1p(limit / psi);
        const auto residual = [&](double delta) {
            const double theta = theta_star + delta;
            if (!(theta < theta_max)) return std::numeric_limits<double>::infinity();
            const double tau = psi * std::expm1(theta);
            return delta + std::log1p(z1_minus_increment(tau, model) / z10);
        };
        RootConfig cfg = config;
        // delta is O(psi); scale the residual tolerance so the offset keeps
        // its relative precision.
        cfg.tol = config.tol * std::min(1.0, psi * psi);
        const double hi = std::min(0.0, (theta_max - theta_star) * (1.0 - kBracketEps));
        const double delta =
            solve_named(residual, -theta_star, hi, cfg, "gamma_n'(theta) = u n").x;
        out.base = theta_star;
        out.offset = delta;
        out.theta = theta_star + delta;
        out.eta = psi * std::expm1(out.theta);
        return out;
    }

    // eta = psi (e^theta - 1): (1 + eta / psi) z_1^-(eta) = u.
    const auto residual = [&](double eta) {
        return std::log1p(eta / psi) + std::log(z_minus(1, eta, model) / u);
    };
    const double eta = solve_named(residual, kBracketEps * limit, (1.0 - kBracketEps) * limit,
                                   config, "gamma_n'(theta) = u n")
                           .x;
    out.eta = eta;
    out.base = 0.0;
    out.theta = std::log1p(eta / psi);
    out.offset = out.theta;
    return out;
}

double variance_q(const Model& model, double theta) {
    return lmgf_n(theta, model, 2);
}

}  // namespace overdisp
