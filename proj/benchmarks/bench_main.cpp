#include <benchmark/benchmark.h>

#include "overdisp/asymptotics.hpp"
#include "overdisp/functionals.hpp"
#include "overdisp/mc.hpp"
#include "overdisp/twist.hpp"

using namespace overdisp;

namespace {

Model model(ServiceDistribution service, std::int64_t n = 50, const char* f = "1") {
    ModelSpec spec;
    spec.subordinator = Subordinator::gamma(1.0, 1.0);
    spec.service = std::move(service);
    spec.u = 1.0;
    spec.scaling = {n, Exponent::parse(f)};
    return validate(std::move(spec));
}

void BM_ZMinusClosed(benchmark::State& state) {
    const Model m = model(ServiceDistribution::power_law(2.0));
    for (auto _ : state) benchmark::DoNotOptimize(z_minus(0, 0.6, m));
}
BENCHMARK(BM_ZMinusClosed);

void BM_ZMinusQuadrature(benchmark::State& state) {
    const Model m = model(ServiceDistribution::power_law(2.0));
    for (auto _ : state) benchmark::DoNotOptimize(z_minus(0, 0.6, m, Evaluation::Quadrature));
}
BENCHMARK(BM_ZMinusQuadrature);

void BM_SolveThetaN(benchmark::State& state) {
    static const char* exponents[] = {"2/5", "1", "5/2"};
    const Model m = model(ServiceDistribution::exponential(2.0), 1000, exponents[state.range(0)]);
    for (auto _ : state) benchmark::DoNotOptimize(solve_theta_n(m).theta);
    state.SetLabel(std::string("f=") + exponents[state.range(0)]);
}
BENCHMARK(BM_SolveThetaN)->DenseRange(0, 2);

void BM_ApproximateXi(benchmark::State& state) {
    const Model m = model(ServiceDistribution::exponential(2.0), 30, "5/3");
    for (auto _ : state) benchmark::DoNotOptimize(approximate_xi(m).xi);
}
BENCHMARK(BM_ApproximateXi);

void BM_WDraw(benchmark::State& state) {
    const Model m = model(ServiceDistribution::exponential(2.0));
    const WSampler sampler(m, static_cast<int>(state.range(0)), 0.3);
    Rng rng = substream(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(rng).w);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WDraw)->Arg(256)->Arg(1024)->Arg(4096);

void BM_EstimateIs(benchmark::State& state) {
    const Model m = model(ServiceDistribution::deterministic(0.5));
    MCConfig cfg;
    cfg.samples = 20000;
    cfg.workers = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_is(m, cfg).estimate);
}
BENCHMARK(BM_EstimateIs)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
