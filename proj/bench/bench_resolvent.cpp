#include <benchmark/benchmark.h>
#include <omp.h>

#include "anharm/pseudo.hpp"
#include "anharm/spectra.hpp"

using namespace anharm;

namespace {

spectra::OperatorMatrix harmonic(int n) {
  spectra::DiscretizationConfig cfg;
  cfg.basis_size = n;
  cfg.hermite_scale = 1.0;
  return spectra::build_matrix(validate_spec(2, 0.6), cfg);
}

const pseudo::Window kWindow{-1.0, 12.0, -1.0, 5.0};

// args: basis size, grid side, threads
void BM_GridBanded(benchmark::State& state) {
  const auto matrix = harmonic(static_cast<int>(state.range(0)));
  const int side = static_cast<int>(state.range(1));
  omp_set_num_threads(static_cast<int>(state.range(2)));
  pseudo::GridOptions opts;
  opts.stability_samples = 0;
  for (auto _ : state) {
    auto field = pseudo::resolvent_grid(matrix, kWindow, side, side, opts);
    benchmark::DoNotOptimize(field.grid.values.data());
  }
  state.counters["points/s"] = benchmark::Counter(static_cast<double>(side) * side, benchmark::Counter::kIsIterationInvariantRate);
}

void BM_GridDenseReference(benchmark::State& state) {
  const auto matrix = harmonic(static_cast<int>(state.range(0)));
  const int side = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto field = pseudo::resolvent_grid_reference(matrix, kWindow, side, side);
    benchmark::DoNotOptimize(field.grid.values.data());
  }
  state.counters["points/s"] = benchmark::Counter(static_cast<double>(side) * side, benchmark::Counter::kIsIterationInvariantRate);
}

void thread_args(benchmark::internal::Benchmark* b) {
  const int hw = omp_get_num_procs();
  for (int n : {100, 200}) {
    for (int t = 1; t <= hw; t *= 2) b->Args({n, 24, t});
    if ((hw & (hw - 1)) != 0) b->Args({n, 24, hw});
  }
}

}  // namespace

BENCHMARK(BM_GridBanded)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridDenseReference)->Args({100, 24})->Args({200, 24})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
