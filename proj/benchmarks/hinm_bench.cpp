#include <benchmark/benchmark.h>

#include "hinm/hinm.hpp"

namespace {

using namespace hinm;

DenseMatrix random_weights(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    DenseMatrix m(rows, cols);
    for (float& v : m.values()) v = static_cast<float>(2.0 * rng.unit() - 1.0);
    return m;
}

HiNMConfig default_pattern(std::size_t V) {
    HiNMConfig c;
    c.vector_size = V;
    return c;
}

void BM_Hungarian(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    CostMatrix c(n, n);
    for (double& v : c.values()) v = rng.unit();
    for (auto _ : state) benchmark::DoNotOptimize(hungarian(c));
}
BENCHMARK(BM_Hungarian)->Arg(8)->Arg(32)->Arg(128);

void BM_GyroPermute(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto w = random_weights(n, n, 2);
    const auto s = magnitude_saliency(w);
    const auto v = validate_config(default_pattern(8), w.shape());
    for (auto _ : state) benchmark::DoNotOptimize(gyro_permute(s, v));
}
BENCHMARK(BM_GyroPermute)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_HinmSpmm(benchmark::State& state) {
    const auto w = random_weights(256, 256, 3);
    const auto v = validate_config(default_pattern(8), w.shape());
    const auto layer = prune_without_permutation(magnitude_saliency(w), v);
    const auto enc = encode(w, layer.masks, layer.sigma);
    const auto x = random_weights(256, 64, 4);
    for (auto _ : state) benchmark::DoNotOptimize(hinm_spmm(enc, x));
}
BENCHMARK(BM_HinmSpmm)->Unit(benchmark::kMicrosecond);

void BM_DenseMatmul(benchmark::State& state) {
    const auto w = random_weights(256, 256, 3);
    const auto x = random_weights(256, 64, 4);
    for (auto _ : state) benchmark::DoNotOptimize(dense_matmul(w, x));
}
BENCHMARK(BM_DenseMatmul)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
