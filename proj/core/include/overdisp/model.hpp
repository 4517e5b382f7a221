#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace overdisp {

// ---------------------------------------------------------------------------
// Subordinator: the increasing Levy process B driving the arrival-rate mass,
// described through its log-mgf beta(theta) = log E exp(theta B(1)).
// ---------------------------------------------------------------------------

/// Gamma process with shape r and rate mu:
/// beta(theta) = r log(mu) - r log(mu - theta), theta < mu.
struct GammaSubordinator {
    double r = 1.0;
    double mu = 1.0;
};

/// User supplied exponent. The domain limit must be given explicitly since
/// nothing constructive can be said about it from the evaluators alone.
struct CustomSubordinator {
    std::function<double(double)> beta;
    std::function<double(double)> beta1;
    std::function<double(double)> beta2;
    double theta_dom = 0.0;
    bool non_lattice = false;
};

class Subordinator {
public:
    static Subordinator gamma(double r, double mu);
    static Subordinator custom(CustomSubordinator spec);

    /// beta^{(order)}(theta) for order in {0, 1, 2}. Throws DomainError when
    /// theta >= domain_limit().
    double derivative(int order, double theta) const;
    double beta(double theta) const { return derivative(0, theta); }

    /// beta'(x) - beta'(0), evaluated without cancellation where a closed
    /// form allows it.
    double beta1_increment(double x) const;

    /// sup{theta : beta(theta) < inf}.
    double domain_limit() const;

    /// b = beta'(0) = E B(1).
    double mean_rate() const { return derivative(1, 0.0); }

    bool is_non_lattice() const;
    const GammaSubordinator* as_gamma() const { return std::get_if<GammaSubordinator>(&kind_); }
    const CustomSubordinator* as_custom() const { return std::get_if<CustomSubordinator>(&kind_); }

private:
    explicit Subordinator(std::variant<GammaSubordinator, CustomSubordinator> kind)
        : kind_(std::move(kind)) {}

    std::variant<GammaSubordinator, CustomSubordinator> kind_;
};

// ---------------------------------------------------------------------------
// Service-time tail Fbar(s) = 1 - F(s), s >= 0.
// ---------------------------------------------------------------------------

struct Deterministic {
    double D = 1.0;
};

struct Exponential {
    double nu = 1.0;
};

/// Fbar(s) = (1 + kappa s)^{-2}.
struct PowerLaw {
    double kappa = 1.0;
};

struct CustomTail {
    std::function<double(double)> tail;
    /// Known discontinuities of the tail inside (0, 1); quadrature splits there.
    std::vector<double> breakpoints;
};

class ServiceDistribution {
public:
    using Kind = std::variant<Deterministic, Exponential, PowerLaw, CustomTail>;

    static ServiceDistribution deterministic(double D);
    static ServiceDistribution exponential(double nu);
    static ServiceDistribution power_law(double kappa);
    static ServiceDistribution custom(std::function<double(double)> tail,
                                      std::vector<double> breakpoints = {});

    double tail(double s) const;
    /// Fbar(0), the supremum of a nonincreasing tail.
    double tail_at_zero() const { return tail(0.0); }
    /// Discontinuities of the tail strictly inside (0, 1), sorted.
    std::vector<double> breakpoints() const;

    const Kind& kind() const { return kind_; }
    template <class T>
    const T* as() const {
        return std::get_if<T>(&kind_);
    }

    /// Short identifier used in reports: "det", "exp", "powerlaw", "custom".
    std::string name() const;

private:
    explicit ServiceDistribution(Kind kind) : kind_(std::move(kind)) {}

    Kind kind_;
};

/// Rate nu of the exponential service whose mean load integral
/// int_0^1 e^{-nu s} ds equals z1, i.e. the root of (1 - e^{-nu}) / nu = z1.
double exponential_rate_for_z1(double z1);

// ---------------------------------------------------------------------------
// Scaling phi_n = n^f, psi_n = n^{1-f}.
// ---------------------------------------------------------------------------

/// Scaling exponent f, optionally carrying the exact ratio p/q it was given
/// as. Regime boundaries are compared exactly when the ratio is known.
class Exponent {
public:
    Exponent() = default;
    static Exponent real(double value);
    static Exponent ratio(std::int64_t p, std::int64_t q);
    /// Accepts "p/q" or a decimal literal.
    static Exponent parse(const std::string& text);

    double value() const { return value_; }
    const std::optional<std::pair<std::int64_t, std::int64_t>>& exact() const { return ratio_; }
    std::string to_string() const;

private:
    double value_ = 1.0;
    std::optional<std::pair<std::int64_t, std::int64_t>> ratio_;
};

struct ScalingSpec {
    std::int64_t n = 1;
    Exponent f;

    double phi() const;
    double psi() const;
};

struct ModelSpec {
    Subordinator subordinator = Subordinator::gamma(1.0, 1.0);
    ServiceDistribution service = ServiceDistribution::deterministic(1.0);
    double u = 1.0;
    ScalingSpec scaling;
};

/// A problem instance that passed validation. Immutable; b and c are cached.
class Model {
public:
    const ModelSpec& spec() const { return spec_; }
    const Subordinator& subordinator() const { return spec_.subordinator; }
    const ServiceDistribution& service() const { return spec_.service; }
    const ScalingSpec& scaling() const { return spec_.scaling; }
    double u() const { return spec_.u; }
    double n() const { return static_cast<double>(spec_.scaling.n); }
    double phi() const { return phi_; }
    double psi() const { return psi_; }

    /// b = beta'(0).
    double b() const { return b_; }
    /// c = b z_1^+, the mean number of jobs per unit n.
    double c() const { return c_; }

    Model with_u(double u) const;
    Model with_scaling(ScalingSpec scaling) const;

private:
    friend Model validate(ModelSpec spec);
    explicit Model(ModelSpec spec) : spec_(std::move(spec)) {}

    ModelSpec spec_;
    double phi_ = 1.0;
    double psi_ = 1.0;
    double b_ = 0.0;
    double c_ = 0.0;
};

/// Checks every invariant of the instance and caches b, c.
/// Throws DomainError, TailError or RarityViolation.
Model validate(ModelSpec spec);

/// c = b int_0^1 Fbar(s) ds, so that E N_n = n c.
double mean_load(const Model& model);
double mean_load(const Subordinator& subordinator, const ServiceDistribution& service);

}  // namespace overdisp
