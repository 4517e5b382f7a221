#include "overdisp/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "overdisp/errors.hpp"
#include "overdisp/twist.hpp"

namespace overdisp {

namespace {

constexpr double kZ95 = 1.959963984540054;

const GammaSubordinator& require_gamma(const Model& model) {
    const auto* g = model.subordinator().as_gamma();
    if (g == nullptr) {
        throw Unsupported("Monte Carlo sampling needs the Gamma subordinator");
    }
    return *g;
}

// Running mean / sum of squared deviations.
struct Moments {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double total = static_cast<double>(count + other.count);
        const double delta = other.mean - mean;
        mean += delta * static_cast<double>(other.count) / total;
        m2 += other.m2 + delta * delta * static_cast<double>(count) *
                             static_cast<double>(other.count) / total;
        count += other.count;
    }
};

}  // namespace

std::string to_string(McMethod method) {
    return method == McMethod::Plain ? "plain" : "is";
}

void MCConfig::check() const {
    if (samples < 100) throw DomainError("mc.samples must be at least 100");
    if (grid_cells < 16) throw DomainError("mc.grid_cells must be at least 16");
    if (workers < 1) throw DomainError("mc.workers must be at least 1");
}

Rng substream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

CellLayout CellLayout::build(const Model& model, int grid_cells) {
    const auto& g = require_gamma(model);
    if (grid_cells < 1) throw DomainError("grid_cells must be positive");
    const auto& service = model.service();

    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(grid_cells) + 4);
    for (int i = 0; i <= grid_cells; ++i) {
        edges.push_back(static_cast<double>(i) / grid_cells);
    }
    for (double x : service.breakpoints()) edges.push_back(x);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    CellLayout out;
    out.rate_ = g.mu;
    out.psi_ = model.psi();
    const double shape_scale = g.r * model.phi();
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double width = edges[i + 1] - edges[i];
        const double weight = service.tail(0.5 * (edges[i] + edges[i + 1]));
        if (weight == 0.0) continue;
        if (!out.cells_.empty() && out.cells_.back().weight == weight) {
            out.cells_.back().shape += shape_scale * width;
        } else {
            out.cells_.push_back({weight, shape_scale * width});
        }
    }
    return out;
}

WSampler::WSampler(const Model& model, int grid_cells, double theta)
    : layout_(CellLayout::build(model, grid_cells)), theta_(theta) {
    const double mu = layout_.rate();
    alpha_ = layout_.psi() * std::expm1(theta);
    rates_.reserve(layout_.cells().size());
    for (const auto& cell : layout_.cells()) {
        const double tilt = alpha_ * cell.weight;
        if (!(tilt < mu)) {
            throw DomainError("importance-sampling tilt reaches the Gamma rate boundary");
        }
        rates_.push_back(mu - tilt);
        log_lr_constant_ -= cell.shape * std::log1p(-tilt / mu);
    }
}

WSampler::Draw WSampler::draw(Rng& rng) const {
    const auto cells = layout_.cells();
    double sum = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        // Unit-rate draw scaled afterwards, so a zero tilt reproduces the
        // untilted sampler exactly.
        std::gamma_distribution<double> unit(cells[i].shape, 1.0);
        sum += cells[i].weight * (unit(rng) / rates_[i]);
    }
    Draw out;
    out.w = layout_.psi() * sum;
    out.log_likelihood_ratio = -alpha_ * out.w + log_lr_constant_;
    return out;
}

double sample_w(const Model& model, Rng& rng, int grid_cells) {
    return WSampler(model, grid_cells).draw(rng).w;
}

double poisson_tail(std::int64_t k, double lambda) {
    if (k <= 0) return 1.0;
    if (!(lambda >= 0.0)) throw DomainError("Poisson mean must be non-negative");
    if (lambda == 0.0) return 0.0;
    return boost::math::gamma_p(static_cast<double>(k), lambda);
}

std::int64_t exceedance_level(const Model& model) {
    const double x = model.u() * model.n();
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) {
        return static_cast<std::int64_t>(nearest);
    }
    return static_cast<std::int64_t>(std::ceil(x));
}

MCEstimate estimate_with(const MCConfig& cfg, McMethod label,
                         const std::function<double(Rng&)>& sample) {
    cfg.check();
    const std::int64_t chunks = (cfg.samples + kChunkSize - 1) / kChunkSize;
    std::vector<Moments> partial(static_cast<std::size_t>(chunks));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                Rng rng = substream(cfg.seed, static_cast<std::uint64_t>(c));
                const std::int64_t count = std::min(kChunkSize, cfg.samples - c * kChunkSize);
                Moments m;
                for (std::int64_t i = 0; i < count; ++i) m.add(sample(rng));
                partial[static_cast<std::size_t>(c)] = m;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks);
                return;
            }
        }
    };

    const int threads = static_cast<int>(std::min<std::int64_t>(cfg.workers, chunks));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    Moments total;
    for (const auto& m : partial) total.merge(m);

    MCEstimate out;
    out.method = label;
    out.samples_used = total.count;
    out.estimate = total.mean;
    const double variance = total.count > 1 ? total.m2 / static_cast<double>(total.count - 1) : 0.0;
    out.std_error = std::sqrt(std::max(variance, 0.0) / static_cast<double>(total.count));
    out.ci95 = {out.estimate - kZ95 * out.std_error, out.estimate + kZ95 * out.std_error};
    return out;
}

MCEstimate estimate_plain(const Model& model, const MCConfig& cfg) {
    cfg.check();
    const WSampler sampler(model, cfg.grid_cells);
    const std::int64_t level = exceedance_level(model);
    return estimate_with(cfg, McMethod::Plain,
                         [&](Rng& rng) { return poisson_tail(level, sampler.draw(rng).w); });
}

MCEstimate estimate_is(const Model& model, const MCConfig& cfg, double theta) {
    cfg.check();
    const WSampler sampler(model, cfg.grid_cells, theta);
    const std::int64_t level = exceedance_level(model);
    return estimate_with(cfg, McMethod::ImportanceSampled, [&](Rng& rng) {
        const auto d = sampler.draw(rng);
        return std::exp(d.log_likelihood_ratio) * poisson_tail(level, d.w);
    });
}

MCEstimate estimate_is(const Model& model, const MCConfig& cfg) {
    return estimate_is(model, cfg, solve_theta_n(model).theta);
}

MCEstimate estimate(const Model& model, const MCConfig& cfg) {
    return cfg.method == McMethod::Plain ? estimate_plain(model, cfg) : estimate_is(model, cfg);
}

}  // namespace overdisp
