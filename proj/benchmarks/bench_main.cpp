#include <benchmark/benchmark.h>

#include "davies/davies_map.hpp"
#include "davies/guichardet.hpp"
#include "davies/renewal.hpp"
#include "davies/trajectory.hpp"

using namespace davies;

static void MatExp(benchmark::State& state) {
    Complex2x2 g;
    g << Complex(-1.0, 0.2), Complex(-0.7, 0.0), Complex(0.0, 0.0), Complex(-0.5, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(mat_exp(g, 1.3));
}
BENCHMARK(MatExp);

static void SuperopExp(benchmark::State& state) {
    const Superop g = master_generator(symmetric_model());
    for (auto _ : state) benchmark::DoNotOptimize(superop_exp(g, 1.3));
}
BENCHMARK(SuperopExp);

static void DaviesMapFull(benchmark::State& state) {
    const Model m = symmetric_model();
    DaviesOptions opts;
    opts.n_max = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(davies_map(m, Event::full(0.1), opts));
}
BENCHMARK(DaviesMapFull)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void DaviesMapOnePhoton(benchmark::State& state) {
    const Model m = symmetric_model();
    const Event e{ChannelEvent::exactly(1, 0.2, 0.8), ChannelEvent::none(), 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(davies_map(m, e));
}
BENCHMARK(DaviesMapOnePhoton)->Unit(benchmark::kMicrosecond);

static void OracleNoPhotons(benchmark::State& state) {
    const Model m = symmetric_model();
    for (auto _ : state) benchmark::DoNotOptimize(oracle_davies_map(m, Event::no_photons(1.0)));
}
BENCHMARK(OracleNoPhotons)->Unit(benchmark::kMillisecond);

static void SampleTrajectory(benchmark::State& state) {
    const Sampler s(symmetric_model(), static_cast<SamplerMode>(state.range(0)));
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(s.sample(DensityMatrix::ground(), 50.0, {1, i++}));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(SampleTrajectory)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

static void LaterCdf(benchmark::State& state) {
    const WaitingTimeModel w(symmetric_model(), DensityMatrix::ground());
    for (auto _ : state) benchmark::DoNotOptimize(w.cdf(Interval::kLater, 10.0));
}
BENCHMARK(LaterCdf)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
