#include "overdisp/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "overdisp/errors.hpp"

namespace overdisp {

namespace {

// Below this tau / mu the identity z2 = -z1 / tau + Z loses digits to
// cancellation, and the direct integral is used instead.
constexpr double kCancellationGuard = 1e-3;

double integrate_unit(const std::function<double(double)>& f, const ServiceDistribution& service,
                      const QuadratureConfig& config) {
    const auto bp = service.breakpoints();
    return integrate(f, 0.0, 1.0, bp, config).value;
}

void check_tilt(double tau, const Subordinator& sub, const ServiceDistribution& service) {
    if (!(tau * service.tail_at_zero() < sub.domain_limit())) {
        throw DomainError("tilt tau * Fbar(0) must stay below theta_dom");
    }
}

double det_support(const Deterministic& d) {
    return std::min(d.D, 1.0);
}

// z_1^- for a Gamma subordinator with power-law service:
// r / (kappa sqrt(mu tau)) * (atanh(x) - atanh(x / (kappa + 1))), x = sqrt(tau / mu),
// continued to tau < 0 through atanh(i y) = i atan(y).
double powerlaw_z1(double tau, const GammaSubordinator& g, double kappa) {
    if (tau == 0.0) return g.r / (g.mu * (kappa + 1.0));
    const double x = std::sqrt(std::abs(tau) / g.mu);
    const double k1 = kappa + 1.0;
    const double diff = tau > 0.0 ? std::atanh(x) - std::atanh(x / k1)
                                  : std::atan(x) - std::atan(x / k1);
    return g.r * diff / (kappa * std::sqrt(g.mu * std::abs(tau)));
}

double exp_z1(double tau, const GammaSubordinator& g, double nu) {
    const double one_minus = -std::expm1(-nu);
    if (tau == 0.0) return g.r * one_minus / (g.mu * nu);
    return g.r / (nu * tau) * std::log1p(tau * one_minus / (g.mu - tau));
}

double exp_zcap(double tau, const GammaSubordinator& g, double nu) {
    const double one_minus = -std::expm1(-nu);
    return g.mu * g.r * one_minus /
           (nu * tau * (g.mu - tau) * (g.mu - tau * std::exp(-nu)));
}

double powerlaw_zcap(double tau, const GammaSubordinator& g, double kappa) {
    const double k1 = kappa + 1.0;
    const double tail = g.r * (g.mu * k1 + tau) /
                        (2.0 * tau * (g.mu - tau) * (g.mu * k1 * k1 - tau));
    return powerlaw_z1(tau, g, kappa) / (2.0 * tau) + tail;
}

// Closed forms; nullopt when none applies.
std::optional<double> z_minus_closed(int k, double tau, const Subordinator& sub,
                                     const ServiceDistribution& service) {
    const auto* g = sub.as_gamma();
    if (g == nullptr) return std::nullopt;

    if (const auto* d = service.as<Deterministic>()) {
        return det_support(*d) * sub.derivative(k, tau);
    }
    if (const auto* e = service.as<Exponential>()) {
        const double nu = e->nu;
        switch (k) {
            case 0:
                return g->r / nu * (dilog(tau / g->mu) - dilog(tau * std::exp(-nu) / g->mu));
            case 1:
                return exp_z1(tau, *g, nu);
            default:
                if (tau > kCancellationGuard * g->mu) {
                    return -exp_z1(tau, *g, nu) / tau + exp_zcap(tau, *g, nu);
                }
                return std::nullopt;
        }
    }
    if (const auto* p = service.as<PowerLaw>()) {
        const double kappa = p->kappa;
        const double k1 = kappa + 1.0;
        switch (k) {
            case 0:
                return g->r / kappa *
                           (std::log1p(-tau / g->mu) - k1 * std::log1p(-tau / (g->mu * k1 * k1))) +
                       2.0 * tau * powerlaw_z1(tau, *g, kappa);
            case 1:
                return powerlaw_z1(tau, *g, kappa);
            default:
                if (tau > kCancellationGuard * g->mu) {
                    return -powerlaw_z1(tau, *g, kappa) / tau + powerlaw_zcap(tau, *g, kappa);
                }
                return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace

double z_plus(int k, const ServiceDistribution& service, Evaluation how,
              const QuadratureConfig& config) {
    if (k < 1) throw DomainError("z_plus needs k >= 1");
    if (how == Evaluation::Auto) {
        if (const auto* d = service.as<Deterministic>()) return det_support(*d);
        if (const auto* e = service.as<Exponential>()) {
            return -std::expm1(-e->nu * k) / (e->nu * k);
        }
        if (const auto* p = service.as<PowerLaw>()) {
            const double m = 2.0 * k - 1.0;
            return -std::expm1(-m * std::log1p(p->kappa)) / (m * p->kappa);
        }
    }
    return integrate_unit([&](double s) { return std::pow(service.tail(s), k); }, service, config);
}

double z_minus(int k, double tau, const Subordinator& subordinator,
               const ServiceDistribution& service, Evaluation how, const QuadratureConfig& config) {
    if (k < 0 || k > 2) throw DomainError("z_minus needs k in {0, 1, 2}");
    check_tilt(tau, subordinator, service);
    if (tau == 0.0 && k == 0) return 0.0;
    if (how == Evaluation::Auto) {
        if (auto closed = z_minus_closed(k, tau, subordinator, service)) return *closed;
    }
    return integrate_unit(
        [&](double s) {
            const double fbar = service.tail(s);
            const double weight = k == 0 ? 1.0 : (k == 1 ? fbar : fbar * fbar);
            if (weight == 0.0 && k > 0) return 0.0;
            return subordinator.derivative(k, tau * fbar) * weight;
        },
        service, config);
}

double z_minus(int k, double tau, const Model& model, Evaluation how,
               const QuadratureConfig& config) {
    return z_minus(k, tau, model.subordinator(), model.service(), how, config);
}

double z1_minus_increment(double tau, const Model& model, const QuadratureConfig& config) {
    const auto& sub = model.subordinator();
    const auto& service = model.service();
    check_tilt(tau, sub, service);
    if (tau == 0.0) return 0.0;
    if (const auto* d = service.as<Deterministic>()) {
        return det_support(*d) * sub.beta1_increment(tau);
    }
    if (const auto* g = sub.as_gamma(); g && std::abs(tau) > kCancellationGuard * g->mu) {
        if (auto closed = z_minus_closed(1, tau, sub, service)) {
            return *closed - *z_minus_closed(1, 0.0, sub, service);
        }
    }
    return integrate_unit(
        [&](double s) {
            const double fbar = service.tail(s);
            return fbar == 0.0 ? 0.0 : sub.beta1_increment(tau * fbar) * fbar;
        },
        service, config);
}

double z_cap(double tau, const Model& model, Evaluation how, const QuadratureConfig& config) {
    const auto* g = model.subordinator().as_gamma();
    if (g == nullptr) throw Unsupported("Z(tau) is defined for the Gamma subordinator only");
    const auto& service = model.service();
    if (!(tau > 0.0) || !(tau * service.tail_at_zero() < g->mu)) {
        throw DomainError("Z(tau) needs 0 < tau and tau * Fbar(0) < mu");
    }
    if (how == Evaluation::Auto) {
        if (const auto* d = service.as<Deterministic>()) {
            const double gap = g->mu - tau;
            return g->mu / tau * det_support(*d) * g->r / (gap * gap);
        }
        if (const auto* e = service.as<Exponential>()) return exp_zcap(tau, *g, e->nu);
        if (const auto* p = service.as<PowerLaw>()) return powerlaw_zcap(tau, *g, p->kappa);
    }
    const double integral = integrate_unit(
        [&](double s) {
            const double fbar = service.tail(s);
            const double gap = g->mu - tau * fbar;
            return g->r * fbar / (gap * gap);
        },
        service, config);
    return g->mu / tau * integral;
}

double lmgf_n(double theta, const Model& model, int order, Evaluation how,
              const QuadratureConfig& config) {
    if (order < 0 || order > 2) throw DomainError("lmgf_n order must be 0, 1 or 2");
    const double tau = model.psi() * std::expm1(theta);
    switch (order) {
        case 0:
            return model.phi() * z_minus(0, tau, model, how, config);
        case 1:
            return model.n() * std::exp(theta) * z_minus(1, tau, model, how, config);
        default: {
            const double e = std::exp(theta);
            return model.n() * model.psi() * e * e * z_minus(2, tau, model, how, config) +
                   model.n() * e * z_minus(1, tau, model, how, config);
        }
    }
}

}  // namespace overdisp
