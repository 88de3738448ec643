// Serial reference vs OpenMP kernels on the three hot paths: posterior grid
// fill, per-theta marginalization scans, and poisson-like cell scans.

#include <benchmark/benchmark.h>

#include "betalike/maxent.hpp"
#include "betalike/parallel.hpp"
#include "betalike/posterior.hpp"
#include "betalike/theta_density.hpp"

using namespace betalike;

namespace {

BinaryOutcomeData binary_data() {
    BinaryOutcomeData d;
    for (int i = 0; i < 40; ++i) {
        d.success_predictors.push_back(0.1 * i - 1.0);
        d.failure_predictors.push_back(-0.1 * i + 0.5);
    }
    return d;
}

ReliabilityData reliability_data() {
    ReliabilityData d;
    for (int i = 1; i <= 12; ++i) d.failures.push_back(0.25 * i);
    d.survivals = {3.5, 4.0, 6.0};
    d.prior_guess_t = 2.0;
    return d;
}

void grid_fill(benchmark::State& state, int cap) {
    par::ScopedCap scoped(cap);
    const auto data = binary_data();
    for (auto _ : state) {
        auto post = build_logistic(data);
        benchmark::DoNotOptimize(post.grid.values.data());
    }
}

void theta_scan(benchmark::State& state, int cap) {
    par::ScopedCap scoped(cap);
    const auto post = build_weibull(reliability_data());
    for (auto _ : state) {
        auto d = weibull_theta_density(post, 1.0, 501);
        benchmark::DoNotOptimize(d.grid.values.data());
    }
}

void cell_scan(benchmark::State& state, int cap) {
    par::ScopedCap scoped(cap);
    GridSpec spec;
    spec.bounds1 = {0.9, 1.5};
    const auto post = build_weibull(reliability_data(), spec);
    for (auto _ : state) {
        auto r = poisson_like_theta_distribution(post, 1.0, 2, 24);
        benchmark::DoNotOptimize(r.mixture.weights.data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(grid_fill, serial, 1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(grid_fill, openmp, 0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(theta_scan, serial, 1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(theta_scan, openmp, 0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(cell_scan, serial, 1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(cell_scan, openmp, 0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
