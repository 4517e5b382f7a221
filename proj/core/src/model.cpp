#include "overdisp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "overdisp/errors.hpp"
#include "overdisp/functionals.hpp"
#include "overdisp/roots.hpp"

namespace overdisp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

constexpr int kTailGridPoints = 1024;
constexpr int kBetaGridPoints = 64;

}  // namespace

// --- Subordinator ---------------------------------------------------------

Subordinator Subordinator::gamma(double r, double mu) {
    return Subordinator(GammaSubordinator{r, mu});
}

Subordinator Subordinator::custom(CustomSubordinator spec) {
    return Subordinator(std::move(spec));
}

double Subordinator::domain_limit() const {
    return std::visit(overloaded{[](const GammaSubordinator& g) { return g.mu; },
                                 [](const CustomSubordinator& c) { return c.theta_dom; }},
                      kind_);
}

bool Subordinator::is_non_lattice() const {
    return std::visit(overloaded{[](const GammaSubordinator&) { return true; },
                                 [](const CustomSubordinator& c) { return c.non_lattice; }},
                      kind_);
}

double Subordinator::derivative(int order, double theta) const {
    if (order < 0 || order > 2) {
        throw DomainError("beta derivative order must be 0, 1 or 2");
    }
    if (!(theta < domain_limit())) {
        throw DomainError("beta evaluated outside its domain (theta >= theta_dom)");
    }
    return std::visit(overloaded{[&](const GammaSubordinator& g) {
                                     const double gap = g.mu - theta;
                                     switch (order) {
                                         case 0:
                                             return -g.r * std::log1p(-theta / g.mu);
                                         case 1:
                                             return g.r / gap;
                                         default:
                                             return g.r / (gap * gap);
                                     }
                                 },
                                 [&](const CustomSubordinator& c) {
                                     switch (order) {
                                         case 0:
                                             return c.beta(theta);
                                         case 1:
                                             return c.beta1(theta);
                                         default:
                                             return c.beta2(theta);
                                     }
                                 }},
                      kind_);
}

double Subordinator::beta1_increment(double x) const {
    if (const auto* g = as_gamma()) {
        if (!(x < g->mu)) {
            throw DomainError("beta evaluated outside its domain (theta >= theta_dom)");
        }
        return g->r * x / (g->mu * (g->mu - x));
    }
    return derivative(1, x) - derivative(1, 0.0);
}

// --- ServiceDistribution --------------------------------------------------

ServiceDistribution ServiceDistribution::deterministic(double D) {
    return ServiceDistribution(Deterministic{D});
}

ServiceDistribution ServiceDistribution::exponential(double nu) {
    return ServiceDistribution(Exponential{nu});
}

ServiceDistribution ServiceDistribution::power_law(double kappa) {
    return ServiceDistribution(PowerLaw{kappa});
}

ServiceDistribution ServiceDistribution::custom(std::function<double(double)> tail,
                                                std::vector<double> breakpoints) {
    std::sort(breakpoints.begin(), breakpoints.end());
    return ServiceDistribution(CustomTail{std::move(tail), std::move(breakpoints)});
}

double ServiceDistribution::tail(double s) const {
    return std::visit(
        overloaded{[&](const Deterministic& d) { return s < d.D ? 1.0 : 0.0; },
                   [&](const Exponential& e) { return std::exp(-e.nu * s); },
                   [&](const PowerLaw& p) {
                       const double base = 1.0 + p.kappa * s;
                       return 1.0 / (base * base);
                   },
                   [&](const CustomTail& c) { return c.tail(s); }},
        kind_);
}

std::vector<double> ServiceDistribution::breakpoints() const {
    std::vector<double> out;
    if (const auto* d = as<Deterministic>()) {
        if (d->D > 0.0 && d->D < 1.0) out.push_back(d->D);
    } else if (const auto* c = as<CustomTail>()) {
        for (double x : c->breakpoints) {
            if (x > 0.0 && x < 1.0) out.push_back(x);
        }
    }
    return out;
}

std::string ServiceDistribution::name() const {
    return std::visit(overloaded{[](const Deterministic&) { return std::string("det"); },
                                 [](const Exponential&) { return std::string("exp"); },
                                 [](const PowerLaw&) { return std::string("powerlaw"); },
                                 [](const CustomTail&) { return std::string("custom"); }},
                      kind_);
}

double exponential_rate_for_z1(double z1) {
    if (!(z1 > 0.0 && z1 < 1.0)) {
        throw DomainError("z1_plus of an exponential tail lies in (0, 1)");
    }
    // (1 - e^{-nu}) / nu decreases from 1 (nu -> 0) to 0 (nu -> inf).
    auto residual = [z1](double nu) { return -std::expm1(-nu) / nu - z1; };
    double hi = 1.0;
    while (residual(hi) > 0.0) hi *= 2.0;
    RootConfig cfg;
    cfg.tol = 0.0;
    return find_root(residual, 1e-300, hi, cfg).x;
}

// --- Exponent / ScalingSpec -----------------------------------------------

Exponent Exponent::real(double value) {
    Exponent e;
    e.value_ = value;
    return e;
}

Exponent Exponent::ratio(std::int64_t p, std::int64_t q) {
    if (q == 0) throw DomainError("scaling exponent has zero denominator");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    const std::int64_t g = std::gcd(p, q);
    Exponent e;
    e.ratio_ = std::make_pair(p / g, q / g);
    e.value_ = static_cast<double>(p / g) / static_cast<double>(q / g);
    return e;
}

Exponent Exponent::parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            std::size_t used_p = 0;
            std::size_t used_q = 0;
            const std::string ps = text.substr(0, slash);
            const std::string qs = text.substr(slash + 1);
            const long long p = std::stoll(ps, &used_p);
            const long long q = std::stoll(qs, &used_q);
            if (used_p != ps.size() || used_q != qs.size()) throw std::invalid_argument(text);
            return ratio(p, q);
        }
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return real(v);
    } catch (const std::logic_error&) {
        throw DomainError("cannot parse scaling exponent '" + text + "'");
    }
}

std::string Exponent::to_string() const {
    if (ratio_) {
        if (ratio_->second == 1) return std::to_string(ratio_->first);
        return std::to_string(ratio_->first) + "/" + std::to_string(ratio_->second);
    }
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
}

double ScalingSpec::phi() const {
    return std::pow(static_cast<double>(n), f.value());
}

double ScalingSpec::psi() const {
    return static_cast<double>(n) / phi();
}

// --- Model ----------------------------------------------------------------

Model Model::with_u(double u) const {
    ModelSpec s = spec_;
    s.u = u;
    return validate(std::move(s));
}

Model Model::with_scaling(ScalingSpec scaling) const {
    ModelSpec s = spec_;
    s.scaling = scaling;
    return validate(std::move(s));
}

namespace {

void validate_subordinator(const Subordinator& sub) {
    if (const auto* g = sub.as_gamma()) {
        require_positive(g->r, "Gamma shape r");
        require_positive(g->mu, "Gamma rate mu");
        return;
    }
    const auto* c = sub.as_custom();
    if (!c->beta || !c->beta1 || !c->beta2) {
        throw DomainError("custom subordinator needs beta, beta' and beta''");
    }
    require_positive(c->theta_dom, "custom subordinator theta_dom");
    if (std::abs(c->beta(0.0)) > 1e-12) {
        throw DomainError("custom subordinator must satisfy beta(0) = 0");
    }
    if (!(c->beta1(0.0) > 0.0)) {
        throw DomainError("custom subordinator must satisfy beta'(0) > 0");
    }
    // beta increasing and convex on a grid strictly inside (-theta_dom, theta_dom).
    for (int i = 0; i < kBetaGridPoints; ++i) {
        const double theta = c->theta_dom * (-1.0 + 2.0 * (i + 0.5) / kBetaGridPoints) * 0.99;
        if (!(c->beta1(theta) > 0.0) || c->beta2(theta) < 0.0) {
            throw DomainError("custom subordinator beta must be increasing and convex");
        }
    }
}

void validate_service(const ServiceDistribution& service) {
    if (const auto* d = service.as<Deterministic>()) require_positive(d->D, "service time D");
    if (const auto* e = service.as<Exponential>()) require_positive(e->nu, "service rate nu");
    if (const auto* p = service.as<PowerLaw>()) require_positive(p->kappa, "power-law kappa");
    if (const auto* c = service.as<CustomTail>(); c && !c->tail) {
        throw TailError("custom service tail has no evaluator");
    }
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kTailGridPoints; ++i) {
        const double s = static_cast<double>(i) / (kTailGridPoints - 1);
        const double v = service.tail(s);
        if (!(v >= 0.0 && v <= 1.0)) {
            throw TailError("service tail leaves [0, 1] at s = " + std::to_string(s));
        }
        if (v > prev) {
            throw TailError("service tail increases at s = " + std::to_string(s));
        }
        prev = v;
    }
    if (!(service.tail_at_zero() > 0.0)) {
        throw TailError("service tail vanishes at 0; no job is ever present");
    }
}

}  // namespace

Model validate(ModelSpec spec) {
    validate_subordinator(spec.subordinator);
    validate_service(spec.service);
    require_positive(spec.u, "rarity level u");
    if (spec.scaling.n < 1) throw DomainError("system size n must be a positive integer");
    require_positive(spec.scaling.f.value(), "scaling exponent f");

    Model m(std::move(spec));
    m.phi_ = m.spec_.scaling.phi();
    m.psi_ = m.spec_.scaling.psi();
    m.b_ = m.spec_.subordinator.mean_rate();
    m.c_ = mean_load(m.spec_.subordinator, m.spec_.service);
    if (!(m.spec_.u > m.c_)) {
        std::ostringstream os;
        os << "rarity condition violated: u = " << m.spec_.u << " <= c = " << m.c_;
        throw RarityViolation(os.str());
    }
    return m;
}

double mean_load(const Subordinator& subordinator, const ServiceDistribution& service) {
    return subordinator.mean_rate() * z_plus(1, service);
}

double mean_load(const Model& model) {
    return model.c();
}

}  // namespace overdisp
