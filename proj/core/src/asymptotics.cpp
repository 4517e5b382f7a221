#include "overdisp/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "overdisp/errors.hpp"
#include "overdisp/functionals.hpp"

namespace overdisp {

namespace {

constexpr double kBoundaryBand = 1e-12;
constexpr int kMaxFastOrder = 2;
constexpr int kMaxSlowOrder = 1;

double log_sqrt_2pi(double variance) {
    return 0.5 * std::log(2.0 * std::numbers::pi * variance);
}

// -log(1 - e^{-theta}), accurate for small theta.
double log_lattice_factor(double theta) {
    return -std::log(-std::expm1(-theta));
}

ExponentTerm make_term(int psi_power, double coefficient, double scale) {
    return ExponentTerm{psi_power, coefficient, scale, coefficient * scale};
}

void finish(AsymptoticResult& out, double log_prefactor) {
    out.exponent = 0.0;
    for (const auto& t : out.exponent_terms) out.exponent += t.value;
    out.prefactor = std::exp(log_prefactor);
    out.xi = out.prefactor * std::exp(out.exponent);
    out.log_xi = log_prefactor + out.exponent;
}

}  // namespace

std::string Regime::name() const {
    switch (kind) {
        case RegimeKind::Fast:
            return "fast";
        case RegimeKind::Slow:
            return "slow";
        default:
            return "balanced";
    }
}

Regime classify_regime(const Exponent& f) {
    Regime out;
    if (const auto& exact = f.exact()) {
        const auto [p, q] = *exact;
        if (p <= 0) throw DomainError("scaling exponent f must be positive");
        if (p == q) return out;
        if (p > q) {
            // f + k(1 - f) >= 0  <=>  k <= p / (p - q).
            out.kind = RegimeKind::Fast;
            out.order = static_cast<int>(p / (p - q));
            out.on_boundary = out.order >= 2 && p % (p - q) == 0;
        } else {
            // f - k(1 - f) >= 0  <=>  k <= p / (q - p).
            out.kind = RegimeKind::Slow;
            out.order = static_cast<int>(p / (q - p));
            out.on_boundary = out.order >= 1 && p % (q - p) == 0;
        }
        return out;
    }

    const double v = f.value();
    if (!(v > 0.0)) throw DomainError("scaling exponent f must be positive");
    if (std::abs(v - 1.0) <= kBoundaryBand) return out;
    if (v > 1.0) {
        out.kind = RegimeKind::Fast;
        const double x = v / (v - 1.0);
        const double k = std::round(x);
        if (k >= 2.0 && std::abs(v - k / (k - 1.0)) <= kBoundaryBand) {
            out.order = static_cast<int>(k);
            out.on_boundary = true;
        } else {
            out.order = static_cast<int>(std::floor(x));
        }
    } else {
        out.kind = RegimeKind::Slow;
        const double x = v / (1.0 - v);
        const double k = std::round(x);
        if (k >= 1.0 && std::abs(v - k / (k + 1.0)) <= kBoundaryBand) {
            out.order = static_cast<int>(k);
            out.on_boundary = true;
        } else {
            out.order = static_cast<int>(std::floor(x));
        }
    }
    return out;
}

AsymptoticResult approximate_xi(const Model& model) {
    AsymptoticResult out;
    out.regime = classify_regime(model.scaling());
    const double n = model.n();
    const double phi = model.phi();
    const double psi = model.psi();

    switch (out.regime.kind) {
        case RegimeKind::Fast: {
            if (out.regime.order > kMaxFastOrder) {
                std::ostringstream os;
                os << "fast regime with f = " << model.scaling().f.to_string()
                   << " has order m+ = " << out.regime.order << "; the coefficient vbar_"
                   << kMaxFastOrder + 1 << " is not available (supported: f > 3/2)";
                throw UnsupportedOrder(os.str(), out.regime.order);
            }
            const auto c = fast_constants(model);
            out.constants = c;
            out.log_decay_rate = c.chi_plus;
            out.exponent_terms.push_back(make_term(1, c.chi_plus, n));
            if (out.regime.order == 2) {
                out.exponent_terms.push_back(make_term(2, c.vbar2, n * psi));
            }
            finish(out, log_lattice_factor(c.theta_star) - log_sqrt_2pi(c.sigma_plus_sq * n));
            return out;
        }
        case RegimeKind::Slow: {
            if (out.regime.order > kMaxSlowOrder) {
                std::ostringstream os;
                os << "slow regime with f = " << model.scaling().f.to_string()
                   << " has order m- = " << out.regime.order << "; the coefficient wbar_"
                   << kMaxSlowOrder + 1 << " is not available (supported: f < 2/3)";
                throw UnsupportedOrder(os.str(), out.regime.order);
            }
            if (!model.subordinator().is_non_lattice()) {
                throw Unsupported(
                    "slow-regime asymptotics need a non-lattice subordinator; declare "
                    "non_lattice for custom subordinators");
            }
            const auto c = slow_constants(model);
            out.constants = c;
            out.log_decay_rate = c.chi_minus;
            out.exponent_terms.push_back(make_term(0, c.chi_minus, phi));
            if (out.regime.order == 1) {
                out.exponent_terms.push_back(make_term(-1, c.wbar1, phi / psi));
            }
            finish(out, -std::log(c.tau_star) - log_sqrt_2pi(c.sigma_minus_sq * phi));
            return out;
        }
        default: {
            const auto c = balanced_constants(model);
            out.constants = c;
            out.log_decay_rate = c.chi_circ;
            out.exponent_terms.push_back(make_term(0, c.chi_circ, n));
            finish(out, log_lattice_factor(c.theta_circ) - log_sqrt_2pi(c.sigma_circ_sq * n));
            return out;
        }
    }
}

PointProbability point_probability(const Model& model) {
    const auto regime = classify_regime(model.scaling());
    if (regime.kind == RegimeKind::Slow) {
        throw Unsupported("point probabilities are only available in the fast and balanced regimes");
    }
    PointProbability out;
    out.level = std::llround(model.u() * model.n());
    const Model at_level = model.with_u(static_cast<double>(out.level) / model.n());
    const auto tail = approximate_xi(at_level);
    const double theta = regime.kind == RegimeKind::Fast
                             ? std::get<FastConstants>(tail.constants).theta_star
                             : std::get<BalancedConstants>(tail.constants).theta_circ;
    const double factor = -std::expm1(-theta);
    out.probability = tail.xi * factor;
    out.log_probability = tail.log_xi + std::log(factor);
    return out;
}

SaddlepointReference saddlepoint_reference(const Model& model) {
    SaddlepointReference out;
    out.twist = solve_theta_n(model);
    const double theta = out.twist.theta;
    const double gamma = lmgf_n(theta, model, 0);
    out.variance = lmgf_n(theta, model, 2);
    out.log_value = gamma - theta * model.u() * model.n() + log_lattice_factor(theta) -
                    log_sqrt_2pi(out.variance);
    out.value = std::exp(out.log_value);
    return out;
}

DecayRate decay_rate(const Model& model) {
    const auto regime = classify_regime(model.scaling());
    switch (regime.kind) {
        case RegimeKind::Fast:
            return {fast_constants(model).chi_plus, "n", model.n()};
        case RegimeKind::Slow:
            return {slow_constants(model).chi_minus, "phi", model.phi()};
        default:
            return {balanced_constants(model).chi_circ, "n", model.n()};
    }
}

}  // namespace overdisp
