#include <benchmark/benchmark.h>

#include <tomokit/cvrecon.hpp>
#include <tomokit/cvstates.hpp>
#include <tomokit/cvtomo.hpp>
#include <tomokit/numkernel.hpp>
#include <tomokit/spintomo.hpp>

using namespace tomokit;

static void BM_FractionalFourier(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto psi = coherent_state({1.0, 0.5}, make_grid(-8.0, 8.0, n));
    double theta = 0.3;
    for (auto _ : state) {
        auto out = fractional_fourier(psi, theta);
        benchmark::DoNotOptimize(out);
        theta += 1e-3;
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_FractionalFourier)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void BM_OpticalTomogram(benchmark::State& state) {
    auto psi = fock_state(2);
    auto thetas = make_grid(0.0, 2.0 * pi, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto w = optical_tomogram(psi, thetas);
        benchmark::DoNotOptimize(w);
    }
}
BENCHMARK(BM_OpticalTomogram)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_ReconstructPhaseSpace(benchmark::State& state) {
    auto m = symplectic_tomogram(coherent_state({0.7, -0.3}));
    ReconstructionOptions opt;
    opt.output_points = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto f = reconstruct_phase_space(m, opt);
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_ReconstructPhaseSpace)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

static void BM_ReconstructDensity(benchmark::State& state) {
    auto m = symplectic_tomogram(fock_state(1));
    const int cutoff = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto rho = reconstruct_density_matrix(m, cutoff);
        benchmark::DoNotOptimize(rho);
    }
}
BENCHMARK(BM_ReconstructDensity)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_HaarUnitary(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    Rng rng = substream(7, 0);
    for (auto _ : state) {
        auto u = haar_unitary(dim, rng);
        benchmark::DoNotOptimize(u);
    }
    state.SetComplexityN(dim);
}
BENCHMARK(BM_HaarUnitary)->RangeMultiplier(2)->Range(2, 64)->Complexity();

static void BM_SpinGroupAverage(benchmark::State& state) {
    auto rho = ghz_state();
    for (auto _ : state) {
        auto avg = group_average_entropy(rho, AverageMode::shannon(), 1000, 11);
        benchmark::DoNotOptimize(avg);
    }
}
BENCHMARK(BM_SpinGroupAverage)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
