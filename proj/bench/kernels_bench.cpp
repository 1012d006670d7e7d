// Serial reference vs OpenMP kernels: explicit sweep and Monte Carlo.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "mcfdm/explicit_kernels.hpp"
#include "mcfdm/monte_carlo.hpp"

using namespace mcfdm;

namespace {

struct SweepFixture {
    std::vector<double> nodes, theta, in, out;
    kernels::StencilInputs inputs;

    explicit SweepFixture(std::size_t n) : nodes(n + 1), theta(n + 1, 1.0), in(n + 1), out(n + 1) {
        const double s_max = 30.0;
        const double ds = s_max / static_cast<double>(n);
        for (std::size_t i = 0; i <= n; ++i) {
            nodes[i] = ds * static_cast<double>(i);
            in[i] = std::max(nodes[i] - 7.5, 0.0);
        }
        const double dt = 0.5 * ds * ds / (0.0625 * s_max * s_max + 0.05 * s_max * ds);
        inputs = {nodes, theta, 0.25, 0.05, ds, dt};
    }
};

void BM_ExplicitSweepSerial(benchmark::State& state) {
    SweepFixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        kernels::explicit_interior_serial(f.inputs, f.in, f.out, kernels::Convection::Enabled);
        benchmark::DoNotOptimize(f.out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ExplicitSweepParallel(benchmark::State& state) {
    SweepFixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        kernels::explicit_interior_parallel(f.inputs, f.in, f.out, kernels::Convection::Enabled, 0);
        benchmark::DoNotOptimize(f.out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void run_mc(benchmark::State& state, McExecution execution) {
    const MarketParams market{0.05, 0.25};
    const OptionContract put{OptionKind::Put, 7.5, 1.0, 7.0};
    McConfig cfg;
    cfg.n_paths = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(price_monte_carlo(put, market, cfg, execution).price);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MonteCarloSerial(benchmark::State& state) { run_mc(state, McExecution::Serial); }
void BM_MonteCarloParallel(benchmark::State& state) { run_mc(state, McExecution::Parallel); }

}  // namespace

BENCHMARK(BM_ExplicitSweepSerial)->RangeMultiplier(10)->Range(100, 1000000);
BENCHMARK(BM_ExplicitSweepParallel)->RangeMultiplier(10)->Range(100, 1000000);
BENCHMARK(BM_MonteCarloSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
