#include <benchmark/benchmark.h>

#include "lozi/classify.hpp"

using namespace lozi;

namespace {

const Params& ref_params() {
    static const Params p = Params::exact(Rational(53, 50), Rational(24, 25));
    return p;
}

void BM_UnstableManifold(benchmark::State& state) {
    const int depth = static_cast<int>(state.range(0));
    std::size_t vertices = 0;
    for (auto _ : state) {
        const auto wu = unstable_manifold(ref_params(), depth);
        vertices = wu.vertex_count();
    }
    state.counters["vertices"] = static_cast<double>(vertices);
}
BENCHMARK(BM_UnstableManifold)->Arg(6)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_TrapPipeline(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(run_trap(ref_params(), 12, 50));
}
BENCHMARK(BM_TrapPipeline)->Unit(benchmark::kMillisecond);

void BM_PeriodicOrbits(benchmark::State& state) {
    const auto prm = Params::exact(Rational(8, 5), Rational(61, 100));
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(periodic_orbits(prm, n));
}
BENCHMARK(BM_PeriodicOrbits)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ClassifyOneHalf(benchmark::State& state) {
    const auto prm = Params::exact(1, Rational(1, 2));
    for (auto _ : state) benchmark::DoNotOptimize(classify_parameters(prm));
}
BENCHMARK(BM_ClassifyOneHalf)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
