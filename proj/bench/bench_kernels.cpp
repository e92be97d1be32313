#include <benchmark/benchmark.h>

#include "rkit/analysis.hpp"
#include "rkit/kernels.hpp"

using namespace rkit;

namespace {

const ScatteringSolver& solver() {
  static const ScatteringSolver s(
      SystemSpec{BasisSpec{BasisFamily::Laguerre, 20.0, 0, 100}, 0.0,
                 parse_potential("5*exp(-(r-3.5)^2/4) - 8*exp(-r^2/5)")});
  return s;
}

std::vector<double> grid(benchmark::State& state) { return linear_grid(0.5, 8.0, state.range(0)); }

void BM_SMatrixSerial(benchmark::State& state) {
  const auto g = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(smatrix_grid_serial(solver(), g));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

void BM_SMatrixParallel(benchmark::State& state) {
  const auto g = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(smatrix_grid_parallel(solver(), g, static_cast<int>(state.range(1))));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

void BM_GreenSerial(benchmark::State& state) {
  const auto g = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(green_abs_grid_serial(solver().green(), 99, 99, g));
}

void BM_GreenParallel(benchmark::State& state) {
  const auto g = grid(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(green_abs_grid_parallel(solver().green(), 99, 99, g, static_cast<int>(state.range(1))));
}

void BM_DosSerial(benchmark::State& state) {
  const auto g = grid(state);
  const Vector& poles = solver().poles();
  const Vector w = solver().green().spectrum().gamma.row(0).transpose().cwiseAbs2();
  const std::vector<double> widths(g.size(), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(dos_smoothing_serial(poles, w, g, widths));
}

void BM_DosParallel(benchmark::State& state) {
  const auto g = grid(state);
  const Vector& poles = solver().poles();
  const Vector w = solver().green().spectrum().gamma.row(0).transpose().cwiseAbs2();
  const std::vector<double> widths(g.size(), 0.05);
  for (auto _ : state)
    benchmark::DoNotOptimize(dos_smoothing_parallel(poles, w, g, widths, static_cast<int>(state.range(1))));
}

}  // namespace

BENCHMARK(BM_SMatrixSerial)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SMatrixParallel)->ArgsProduct({{2000, 20000}, {2, 4, 8}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GreenSerial)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GreenParallel)->ArgsProduct({{20000}, {2, 4, 8}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DosSerial)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DosParallel)->ArgsProduct({{20000}, {2, 4, 8}})->Unit(benchmark::kMillisecond)->UseRealTime();

int main(int argc, char** argv) {
  solver();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
