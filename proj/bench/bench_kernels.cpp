// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <omp.h>

#include <vector>

#include "torustwist/levelset.hpp"
#include "torustwist/maps.hpp"
#include "torustwist/parallel.hpp"
#include "torustwist/ric.hpp"
#include "torustwist/rotation.hpp"

using namespace torustwist;

namespace {

void BM_LevelsetSerial(benchmark::State& state) {
  const TwistFamily f = builtin_standard(5.0);
  for (auto _ : state) benchmark::DoNotOptimize(serial::compute_levelset(f, 0, 2, static_cast<int>(state.range(0))));
}

void BM_LevelsetParallel(benchmark::State& state) {
  const TwistFamily f = builtin_standard(5.0);
  for (auto _ : state) benchmark::DoNotOptimize(compute_levelset(f, 0, 2, static_cast<int>(state.range(0))));
}

void BM_RotationsSerial(benchmark::State& state) {
  const TwistFamily f = builtin_standard(0.9);
  const auto seeds = band_seeds(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(serial::estimate_rotations(f, seeds, 2000, 200));
}

void BM_RotationsParallel(benchmark::State& state) {
  const TwistFamily f = builtin_standard(0.9);
  const auto seeds = band_seeds(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_rotations(f, seeds, 2000, 200));
}

void BM_ClimbingSerial(benchmark::State& state) {
  const TwistFamily f = builtin_standard(2.0);
  const auto seeds = band_seeds(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(serial::find_climbing_orbit(f, 3.0, -3.0, 5000, seeds));
}

void BM_ClimbingParallel(benchmark::State& state) {
  const TwistFamily f = builtin_standard(2.0);
  const auto seeds = band_seeds(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(find_climbing_orbit(f, 3.0, -3.0, 5000, seeds));
}

}  // namespace

BENCHMARK(BM_LevelsetSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LevelsetParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RotationsSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RotationsParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClimbingSerial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClimbingParallel)->Arg(64)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  set_workers(omp_get_max_threads());
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
