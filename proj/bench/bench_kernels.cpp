// Serial reference against the OpenMP version of the two enumeration kernels.

#include <benchmark/benchmark.h>

#include "cachecraft/evaluator.hpp"
#include "cachecraft/probability.hpp"
#include "cachecraft/schemes.hpp"

namespace cc = cachecraft;

namespace {

cc::SystemConfig config(int K, int N) {
  return cc::SystemConfig(K, std::vector<double>(N, 1.0), cc::zipf_popularities(N, 0.8),
                          std::vector<double>(K, 0.5 * N));
}

template <bool Parallel>
void expected_rate_kernel(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const int N = static_cast<int>(state.range(1));
  const cc::SystemConfig cfg = config(K, N);
  const cc::Placement pl = cc::random_popularity_baseline(cfg);
  for (auto _ : state) {
    const double r = Parallel ? cc::expected_rate(cfg, pl).expected_rate
                              : cc::expected_rate_serial(cfg, pl).expected_rate;
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cc::demand_count(N, K)));
}

template <bool Parallel>
void order_stat_kernel(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const int N = static_cast<int>(state.range(1));
  const std::vector<double> p = cc::zipf_popularities(N, 0.8);
  for (auto _ : state) {
    const cc::OrderStatTable t =
        Parallel ? cc::order_stat_oracle(p, K) : cc::order_stat_oracle_serial(p, K);
    benchmark::DoNotOptimize(t.probs.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cc::demand_count(N, K)));
}

void shapes(benchmark::internal::Benchmark* b) {
  b->Args({4, 6})->Args({6, 6})->Args({8, 5})->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(expected_rate_kernel<false>)->Name("expected_rate/serial")->Apply(shapes);
BENCHMARK(expected_rate_kernel<true>)->Name("expected_rate/openmp")->Apply(shapes);
BENCHMARK(order_stat_kernel<false>)->Name("order_stat_oracle/serial")->Apply(shapes);
BENCHMARK(order_stat_kernel<true>)->Name("order_stat_oracle/openmp")->Apply(shapes);

BENCHMARK_MAIN();
