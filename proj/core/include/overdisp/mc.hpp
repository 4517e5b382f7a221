#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "overdisp/model.hpp"

namespace overdisp {

enum class McMethod { Plain, ImportanceSampled };

std::string to_string(McMethod method);

struct MCConfig {
    std::int64_t samples = 10000;
    /// Number M of equal cells the interval [0, 1] is cut into.
    int grid_cells = 1024;
    std::uint64_t seed = 1;
    McMethod method = McMethod::ImportanceSampled;
    int workers = 1;

    /// Throws DomainError unless samples >= 100, grid_cells >= 16, workers >= 1.
    void check() const;
};

struct MCEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::pair<double, double> ci95{0.0, 0.0};
    std::int64_t samples_used = 0;
    McMethod method = McMethod::Plain;
};

using Rng = std::mt19937_64;

/// Generator for substream `index` of `seed`. Substreams are derived by
/// hashing, not by jumping, so they are independent of how many exist.
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Samples handed to one substream. The sample budget is cut into chunks of
/// this size regardless of the worker count.
inline constexpr std::int64_t kChunkSize = 1024;

/// Discretization of W = psi_n int_0^{phi_n} Fbar(s/phi_n) dB(s) into
/// independent Gamma increments with weight Fbar(midpoint).
struct Cell {
    double weight = 0.0;
    /// Gamma shape r * phi_n * width.
    double shape = 0.0;
};

class CellLayout {
public:
    /// M equal cells over [0, 1], additionally split at tail discontinuities.
    /// Adjacent cells with identical weight are merged (a sum of independent
    /// Gamma(a_i, mu) is Gamma(sum a_i, mu)) and zero-weight cells dropped.
    /// Throws Unsupported for non-Gamma subordinators.
    static CellLayout build(const Model& model, int grid_cells);

    std::span<const Cell> cells() const { return cells_; }
    double rate() const { return rate_; }
    double psi() const { return psi_; }

private:
    std::vector<Cell> cells_;
    double rate_ = 1.0;
    double psi_ = 1.0;
};

/// One realization of W under the exponentially tilted increment law:
/// cell i is drawn from Gamma(shape_i, rate mu - tilt * weight_i), where
/// tilt = psi_n (e^theta - 1). theta = 0 gives the untilted law.
class WSampler {
public:
    WSampler(const Model& model, int grid_cells, double theta = 0.0);

    struct Draw {
        double w = 0.0;
        /// log dP/dQ of the drawn increments.
        double log_likelihood_ratio = 0.0;
    };

    Draw draw(Rng& rng) const;
    const CellLayout& layout() const { return layout_; }
    double theta() const { return theta_; }

private:
    CellLayout layout_;
    double theta_ = 0.0;
    double alpha_ = 0.0;
    std::vector<double> rates_;
    double log_lr_constant_ = 0.0;
};

/// One draw of W under the original measure.
double sample_w(const Model& model, Rng& rng, int grid_cells);

/// P(Poisson(lambda) >= k), via the regularized lower incomplete gamma P(k, lambda).
double poisson_tail(std::int64_t k, double lambda);

/// ceil(u n), treating values within 1e-9 relative of an integer as that integer.
std::int64_t exceedance_level(const Model& model);

/// Generic chunked estimator: averages sample(rng) over cfg.samples draws,
/// each chunk fed by its own substream, reduced in chunk order so the result
/// is independent of cfg.workers.
MCEstimate estimate_with(const MCConfig& cfg, McMethod label,
                         const std::function<double(Rng&)>& sample);

/// Conditional Monte Carlo: mean of P(Poisson(W) >= ceil(u n)) over W draws.
MCEstimate estimate_plain(const Model& model, const MCConfig& cfg);

/// Importance sampling with the twist theta_n from solve_theta_n.
MCEstimate estimate_is(const Model& model, const MCConfig& cfg);
/// Importance sampling with an explicit twist.
MCEstimate estimate_is(const Model& model, const MCConfig& cfg, double theta);

/// Dispatches on cfg.method.
MCEstimate estimate(const Model& model, const MCConfig& cfg);

}  // namespace overdisp
