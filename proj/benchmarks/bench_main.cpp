#include <benchmark/benchmark.h>

#include "cos2phi/noise.hpp"
#include "cos2phi/spectrum.hpp"
#include "cos2phi/sweep.hpp"
#include "cos2phi/thermal.hpp"

using namespace cos2phi;

static void BM_Eigensystem(benchmark::State& state)
{
    const auto p = CircuitParams::from_ratio(0.5, 10.0, -0.1, 0.01, 1e-4, 0.25, static_cast<int>(state.range(0)));
    const auto h = build_hamiltonian(p);
    for (auto _ : state) benchmark::DoNotOptimize(eigensystem(h, 4));
    state.SetComplexityN(2 * state.range(0) + 1);
}
BENCHMARK(BM_Eigensystem)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

static void BM_ConvergeTruncation(benchmark::State& state)
{
    const auto p = CircuitParams::from_ratio(0.5, 0.5 * static_cast<double>(state.range(0)), -0.1, 0.01, 1e-4, 0.25);
    for (auto _ : state) benchmark::DoNotOptimize(converge_truncation(p));
}
BENCHMARK(BM_ConvergeTruncation)->Arg(1)->Arg(20)->Arg(150);

static void BM_CoherenceReport(benchmark::State& state)
{
    const auto p = with_converged_truncation(CircuitParams::from_ratio(0.8, 8.6, -0.1, 0.01, 1e-5, 0.25));
    const CoherenceOptions options{state.range(0) != 0, 4, false};
    for (auto _ : state) benchmark::DoNotOptimize(coherence_report(p, NoiseSpec{}, options));
}
BENCHMARK(BM_CoherenceReport)->Arg(0)->Arg(1);

static void BM_EffectiveRates(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    RateMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) r.set_rate(i, j, j < i ? 1.0 + i : 1e-3 * (1.0 + j));
    for (auto _ : state) benchmark::DoNotOptimize(effective_qubit_rates(r));
}
BENCHMARK(BM_EffectiveRates)->Arg(3)->Arg(4)->Arg(8);

static void BM_EvaluateCell(benchmark::State& state)
{
    const auto grid = SweepGrid::reduced(-5.0);
    const auto i = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_cell(grid, i, i));
}
BENCHMARK(BM_EvaluateCell)->Arg(5)->Arg(15)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
