// Parallel kernels against their serial twins, plus one full solve.
#include "nikishin/kernels.hpp"
#include "nikishin/reference_r2.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace nikishin;

namespace {

std::vector<Cell> cells(int n, double lo, double hi) {
  std::vector<Cell> out;
  const double h = (hi - lo) / n;
  for (int i = 0; i < n; ++i) out.push_back({lo + i * h, lo + (i + 1) * h});
  return out;
}

template <bool Parallel>
void BM_fill_block(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto r = cells(n, 1e-3, 20.0), c = cells(n, -20.0, -1e-3);
  RowMatrix out(n, n);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::fill_block(r, c, out);
    else
      kernels::fill_block_serial(r, c, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <bool Parallel>
void BM_gemv_add(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RowMatrix K = RowMatrix::Random(n, n);
  std::vector<double> x(n, 1.0), y(n, 0.0);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::gemv_add(K, x, 0.5, y);
    else
      kernels::gemv_add_serial(K, x, 0.5, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_solve_example(benchmark::State& state) {
  SolveConfig cfg;
  cfg.masses = {1.0, 1.0};
  const auto prob = example_problem(1.0);
  for (auto _ : state) {
    auto sol = solve_problem(prob, GridSpec{static_cast<int>(state.range(0)), 1.0}, cfg);
    benchmark::DoNotOptimize(sol.report.energy);
  }
}

}  // namespace

BENCHMARK(BM_fill_block<false>)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fill_block<true>)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gemv_add<false>)->Arg(800)->Arg(3200)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gemv_add<true>)->Arg(800)->Arg(3200)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_solve_example)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
