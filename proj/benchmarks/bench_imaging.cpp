// SPDX-License-Identifier: Apache-2.0
//
// Costs of the imaging hot loops on desk-scale inputs: one pulse of
// migration, a block of pattern accumulation, and the top eigenpairs.
#include <benchmark/benchmark.h>

#include "scenes.hpp"
#include "xcorr/imaging.hpp"
#include "xcorr/spectral.hpp"

using namespace xcorr;

namespace {

Scene bench_scene(int pulses, int grid_side) {
    Scene s = testing::desk_scene(testing::quad_offsets(), pulses);
    s.window.count_u = s.window.count_v = grid_side;
    return s;
}

void BM_MigratePulse(benchmark::State& state) {
    const Scene s = bench_scene(1, static_cast<int>(state.range(0)));
    const SignalSet d = synthesize_frequency_data(s);
    for (auto _ : state) benchmark::DoNotOptimize(migrate_pulse(d, s.window, 0));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.frequency_count()));
}
BENCHMARK(BM_MigratePulse)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

void BM_AccumulateProducts(benchmark::State& state) {
    const Scene s = bench_scene(static_cast<int>(state.range(0)), 41);
    const SignalSet d = synthesize_frequency_data(s);
    for (auto _ : state) benchmark::DoNotOptimize(accumulate_products(d, s.window));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AccumulateProducts)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TopEigpairs(benchmark::State& state) {
    const Scene s = bench_scene(64, 41);
    const ImagingProducts p = accumulate_products(synthesize_frequency_data(s), s.window);
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(top_eigpairs(p.pattern->matrix, m));
}
BENCHMARK(BM_TopEigpairs)->Arg(1)->Arg(25)->Unit(benchmark::kMillisecond);

}  // namespace

// The distribution's benchmark_main archive carries LTO bytecode from another
// compiler build, so the entry point is defined here.
BENCHMARK_MAIN();
