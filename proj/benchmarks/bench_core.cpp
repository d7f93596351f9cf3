#include <benchmark/benchmark.h>

#include "entrank/criteria.hpp"
#include "entrank/ef_optimizer.hpp"
#include "entrank/random.hpp"

using namespace entrank;

static void BM_HermitianEig(benchmark::State& st) {
    const std::size_t n = static_cast<std::size_t>(st.range(0));
    const BipartiteState s = random_state({n, n}, n * n, 1);
    for (auto _ : st) benchmark::DoNotOptimize(hermitian_eig(s.rho()));
}
BENCHMARK(BM_HermitianEig)->Arg(2)->Arg(3)->Arg(4);

static void BM_Analyze(benchmark::State& st) {
    const std::size_t n = static_cast<std::size_t>(st.range(0));
    const BipartiteState s = random_state({n, n}, 2, 2);
    for (auto _ : st) benchmark::DoNotOptimize(analyze(s));
}
BENCHMARK(BM_Analyze)->Arg(2)->Arg(3)->Arg(4);

static void BM_EfMinimize(benchmark::State& st) {
    const BipartiteState s = random_state({2, 2}, static_cast<std::size_t>(st.range(0)), 3);
    for (auto _ : st) benchmark::DoNotOptimize(ef_minimize(s, 4, 4, 0));
}
BENCHMARK(BM_EfMinimize)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
