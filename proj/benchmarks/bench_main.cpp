#include <benchmark/benchmark.h>

#include <vector>

#include "contagion/laplace.hpp"
#include "contagion/simulator.hpp"

using namespace contagion;

namespace {

ModelParams symmetric() {
    ModelParams p;
    p.delta1 = p.delta2 = 2.0;
    p.rho1 = p.rho2 = 1.0;
    p.h1 = p.h2 = MarkDistribution::exponential(1.0);
    p.g11 = p.g12 = p.g21 = p.g22 = MarkDistribution::exponential(2.0);
    return p;
}

void BM_Thinning(benchmark::State& state) {
    const ModelParams p = symmetric();
    const double horizon = static_cast<double>(state.range(0));
    std::uint64_t seed = 1;
    std::size_t events = 0;
    for (auto _ : state) {
        auto h = simulate_thinning(p, horizon, seed++);
        events += h.events.size();
        benchmark::DoNotOptimize(h);
    }
    state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Thinning)->Arg(20)->Arg(200);

void BM_Cluster(benchmark::State& state) {
    const ModelParams p = symmetric();
    const double horizon = static_cast<double>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto h = simulate_cluster(p, horizon, 30, seed++);
        benchmark::DoNotOptimize(h);
    }
}
BENCHMARK(BM_Cluster)->Arg(20)->Arg(200);

void BM_SolveL(benchmark::State& state) {
    const ModelParams p = symmetric();
    std::vector<double> v(2 * static_cast<std::size_t>(state.range(0)), 0.5);
    const TimeGrid grid = TimeGrid::uniform(10.0, 1e-3);
    for (auto _ : state) benchmark::DoNotOptimize(solve_l(p, v, grid));
}
BENCHMARK(BM_SolveL)->Arg(1)->Arg(4)->Arg(16);

void BM_LimitingLaplace(benchmark::State& state) {
    const ModelParams p = symmetric();
    for (auto _ : state) benchmark::DoNotOptimize(limiting_laplace(p, 1.0, 1.0, 1e-9));
}
BENCHMARK(BM_LimitingLaplace);

}  // namespace
BENCHMARK_MAIN();
