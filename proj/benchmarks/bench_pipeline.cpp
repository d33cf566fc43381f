#include <benchmark/benchmark.h>

#include "levyest/estimator.hpp"
#include "levyest/path.hpp"
#include "levyest/risk.hpp"

using namespace levyest;

namespace {

NoiseModel mixed_noise() {
    const double r = 1.0 / std::sqrt(2.0);
    return make_noise_model(r, r, JumpLaw::two_point(1.0, 1.0));
}

void bm_simulate_path(benchmark::State& state) {
    const auto signal = SignalSpec::multipath_ten();
    const auto noise = mixed_noise();
    const long p = state.range(0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_path(signal, noise, 0.1, p, seed++));
    }
    state.SetItemsProcessed(state.iterations() * p);
}
BENCHMARK(bm_simulate_path)->Arg(1000)->Arg(10000)->Arg(100000);

void bm_coefficient_sums(benchmark::State& state) {
    const auto signal = SignalSpec::multipath_ten();
    const auto noise = mixed_noise();
    const long p = state.range(0);
    const auto path = simulate_path(signal, noise, 0.1, p, 7);
    const auto& basis = *trig_basis();
    const long n = usable_coefficients(basis, 0.1, p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stieltjes_sums(path, basis, n));
    }
    state.SetItemsProcessed(state.iterations() * p * n);
}
BENCHMARK(bm_coefficient_sums)->Arg(1000)->Arg(10000)->Arg(100000);

void bm_select_model(benchmark::State& state) {
    const double eps = std::pow(10.0, -static_cast<double>(state.range(0)));
    const auto signal = SignalSpec::multipath_ten();
    const auto noise = make_noise_model(1.0, 0.0, std::nullopt);
    PipelineConfig pc;
    pc.basis = sin_family_basis();
    pc.variance = PipelineConfig::Variance::Known;
    const auto ctx = make_pipeline_context(noise, eps, 10000, pc);
    const auto path = simulate_path(signal, noise, eps, 10000, 11);
    const auto theta = fourier_estimates(path, path, *ctx.basis, ctx.n_eff);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            select_model(ctx.family, theta, ctx.kappa_known, eps, ctx.delta));
    }
    state.SetItemsProcessed(state.iterations() * ctx.family.weights.size());
}
BENCHMARK(bm_select_model)->Arg(1)->Arg(3)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
