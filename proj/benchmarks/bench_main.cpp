#include <benchmark/benchmark.h>

#include <numbers>

#include "isp1d/forward.hpp"
#include "isp1d/functionals.hpp"
#include "isp1d/reconstruction.hpp"
#include "isp1d/stability.hpp"

using namespace isp1d;

namespace {

void BM_BoundaryData(benchmark::State& state) {
  const auto f = make_bump(SpatialGrid(401), {});
  const auto fg = FrequencyGrid::with_density(0.0, static_cast<double>(state.range(0)), 512);
  for (auto _ : state) benchmark::DoNotOptimize(boundary_data(f, fg));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(fg.size()));
}
BENCHMARK(BM_BoundaryData)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SectorFunctional(benchmark::State& state) {
  const auto f = make_bump(SpatialGrid(401), {});
  const auto k = SectorWavenumber::polar(static_cast<double>(state.range(0)), std::numbers::pi / 8);
  for (auto _ : state) benchmark::DoNotOptimize(I1_sector(k, f) + I2_sector(k, f));
}
BENCHMARK(BM_SectorFunctional)->Arg(5)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_Tikhonov(benchmark::State& state) {
  const auto f = make_bump(SpatialGrid(401), {});
  const double K = static_cast<double>(state.range(0));
  const auto d = boundary_data(f, FrequencyGrid::with_density(0.0, K, 16));
  for (auto _ : state) benchmark::DoNotOptimize(tikhonov_reconstruct(d, K, 1e-6, f.grid()));
}
BENCHMARK(BM_Tikhonov)->Arg(8)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_VerifyTheorem(benchmark::State& state) {
  const auto f = make_bump(SpatialGrid(401), {});
  for (auto _ : state) benchmark::DoNotOptimize(verify_theorem(f, 16.0, 0.0, 0));
}
BENCHMARK(BM_VerifyTheorem)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
