#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "overdisp/model.hpp"
#include "overdisp/twist.hpp"

namespace overdisp {

enum class RegimeKind { Fast, Balanced, Slow };

/// Timescale regime of phi_n = n^f.
///
/// Fast (f > 1): order = m+ = max{k >= 1 : f + k(1 - f) >= 0}, the number of
/// exponent terms phi_n psi_n^k that stay bounded away from zero.
/// Slow (f < 1): order = m- = max{k >= 0 : f - k(1 - f) >= 0}.
/// Balanced (f = 1): order 0.
struct Regime {
    RegimeKind kind = RegimeKind::Balanced;
    int order = 0;
    /// f sits exactly on a boundary where phi_n psi_n^{+-order} is constant.
    bool on_boundary = false;

    std::string name() const;
    friend bool operator==(const Regime&, const Regime&) = default;
};

Regime classify_regime(const Exponent& f);
inline Regime classify_regime(const ScalingSpec& scaling) { return classify_regime(scaling.f); }

/// One term coefficient * scale of the exponent, scale = phi_n psi_n^psi_power.
struct ExponentTerm {
    int psi_power = 0;
    double coefficient = 0.0;
    double scale = 0.0;
    double value = 0.0;
};

using RegimeConstants = std::variant<FastConstants, BalancedConstants, SlowConstants>;

struct AsymptoticResult {
    Regime regime;
    RegimeConstants constants;
    std::vector<ExponentTerm> exponent_terms;
    double prefactor = 0.0;
    /// Sum of the exponent term values.
    double exponent = 0.0;
    /// prefactor * exp(exponent); underflows to 0 for large n, use log_xi there.
    double xi = 0.0;
    double log_xi = 0.0;
    /// chi+, chi (balanced) or chi-.
    double log_decay_rate = 0.0;
};

/// Exact asymptotics of xi_n(u) = P(N_n >= u n) for the model's regime.
/// Throws UnsupportedOrder when m+ > 2 or m- > 1, Unsupported for slow-regime
/// custom subordinators that are not declared non-lattice.
AsymptoticResult approximate_xi(const Model& model);

struct PointProbability {
    /// round(u n), the level k in P(N_n = k).
    std::int64_t level = 0;
    double probability = 0.0;
    double log_probability = 0.0;
};

/// Asymptotics of P(N_n = k) with k = round(u n): the tail asymptotics times
/// 1 - e^{-theta}. Fast and balanced regimes only; Unsupported otherwise.
PointProbability point_probability(const Model& model);

struct SaddlepointReference {
    double value = 0.0;
    double log_value = 0.0;
    TwistSolution twist;
    double variance = 0.0;
};

/// Finite-n lattice saddlepoint evaluation
///   exp(gamma_n(theta_n) - theta_n u n) / ((1 - e^{-theta_n}) sqrt(2 pi gamma_n''(theta_n)))
/// at the exact numerical twist.
SaddlepointReference saddlepoint_reference(const Model& model);

struct DecayRate {
    double rate = 0.0;
    /// "n" or "phi".
    std::string scale_name;
    double scale = 0.0;
};

/// Logarithmic decay rate: log xi_n(u) / scale -> rate.
DecayRate decay_rate(const Model& model);

}  // namespace overdisp
