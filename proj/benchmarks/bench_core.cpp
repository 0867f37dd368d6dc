#include <benchmark/benchmark.h>

#include <memory>

#include "cd/analysis.h"
#include "cd/coevolution.h"
#include "cd/montecarlo.h"

using namespace cd;

static void BM_UStar(benchmark::State& state) {
	for (auto _ : state)
		benchmark::DoNotOptimize(u_star(3, 0.0));
}
BENCHMARK(BM_UStar)->Unit(benchmark::kMillisecond);

static void BM_TrendRun(benchmark::State& state) {
	SimulationConfig c;
	c.network = TemporalNetwork{static_cast<std::size_t>(state.range(0)), ContactParams{}};
	c.revision.protocol = TrendMixed{0.2, InitialTrend::rising};
	c.initial.zeta0 = 0.02;
	c.horizon = 1000;
	std::uint64_t seed = 0;
	for (auto _ : state)
		benchmark::DoNotOptimize(simulate(c, ++seed).zeta.size());
}
BENCHMARK(BM_TrendRun)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_LogitSmallWorld(benchmark::State& state) {
	rng_t g(42);
	const Graph raw = generators::small_world(84, 3, 0.1, g);
	SimulationConfig c;
	c.game = CoordinationParams{1.0};
	c.network = StaticNetwork{std::make_shared<Graph>(row_normalize(raw)), nullptr};
	c.revision.protocol = Logit{{4.0}, false};
	c.horizon = 300;
	std::uint64_t seed = 0;
	for (auto _ : state)
		benchmark::DoNotOptimize(simulate(c, ++seed).zeta.back());
}
BENCHMARK(BM_LogitSmallWorld)->Unit(benchmark::kMillisecond);

static void BM_Nash(benchmark::State& state) {
	rng_t g(3);
	const Graph a = row_normalize(generators::small_world(static_cast<std::size_t>(state.range(0)), 2, 0.2, g));
	for (auto _ : state)
		benchmark::DoNotOptimize(find_nash_bruteforce(a, CoordinationParams{0.0}).size());
}
BENCHMARK(BM_Nash)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_CriticalMass(benchmark::State& state) {
	const auto a = std::make_shared<Graph>(row_normalize(generators::complete(static_cast<std::size_t>(state.range(0)))));
	CoevolutionParams p;
	p.beta = {1.0};
	const CoevolutionRule rule(a, nullptr, p);
	for (auto _ : state)
		benchmark::DoNotOptimize(critical_mass(rule));
}
BENCHMARK(BM_CriticalMass)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
