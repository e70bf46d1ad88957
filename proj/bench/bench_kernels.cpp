// Serial reference vs OpenMP kernels. Thread count is the benchmark argument
// for the parallel variants (0 = runtime default).

#include <benchmark/benchmark.h>

#include <random>

#include "rgtest/kernels.hpp"
#include "rgtest/rng.hpp"
#include "rgtest/weighting.hpp"

using namespace rgtest;

namespace {

DataMatrix points(std::size_t n, std::size_t d) {
    CounterEngine eng(11);
    std::normal_distribution<double> z;
    std::vector<double> v(n * d);
    for (auto& x : v) x = z(eng);
    return DataMatrix(n, d, std::move(v));
}

struct PermFixture {
    SimilarityGraph graph;
    std::vector<kernels::WeightChannel> channels;
    LabelVector labels;

    PermFixture() {
        const auto data = points(200, 100);
        graph = kmst(kernels::distance_matrix_serial(data, Metric::l2), 5);
        for (auto kind : {WeightKind::w1, WeightKind::unit}) {
            const auto wg = assign_weights(graph, kind);
            channels.push_back({{wg.weights().begin(), wg.weights().end()}, null_moments(wg, 100, 100)});
        }
        labels = LabelVector::split(100, 100);
    }
};

const PermFixture& perm_fixture() {
    static const PermFixture f;
    return f;
}

void BM_DistanceSerial(benchmark::State& state) {
    const auto data = points(static_cast<std::size_t>(state.range(0)), 100);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::distance_matrix_serial(data, Metric::l2));
}

void BM_DistanceParallel(benchmark::State& state) {
    const auto data = points(static_cast<std::size_t>(state.range(0)), 100);
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::distance_matrix_parallel(data, Metric::l2, threads));
}

void BM_PermutationSerial(benchmark::State& state) {
    const auto& f = perm_fixture();
    const auto b = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            kernels::permutation_null_serial(f.graph.edges(), f.channels, f.labels.values(), b, 42));
}

void BM_PermutationParallel(benchmark::State& state) {
    const auto& f = perm_fixture();
    const auto b = static_cast<std::size_t>(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            kernels::permutation_null_parallel(f.graph.edges(), f.channels, f.labels.values(), b, 42, threads));
}

}  // namespace

BENCHMARK(BM_DistanceSerial)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceParallel)->ArgsProduct({{200, 800}, {0, 1, 2, 4}})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PermutationSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PermutationParallel)->ArgsProduct({{1000, 10000}, {0, 1, 2, 4}})->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
