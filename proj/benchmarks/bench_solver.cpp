#include <benchmark/benchmark.h>

#include "rmt/overlap.hpp"
#include "rmt/shrinkage.hpp"
#include "rmt/stieltjes.hpp"

namespace {

rmt::PopulationSpectrum three_atoms() {
  return rmt::PopulationSpectrum::validate({{0.2, 1.0}, {0.4, 3.0}, {0.4, 10.0}});
}

void BM_SolveMF(benchmark::State& state) {
  const auto spec = three_atoms();
  const rmt::Complex z{4.0, 1.0 / static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(rmt::solve_mF(z, spec, 2.0));
}
BENCHMARK(BM_SolveMF)->Arg(1)->Arg(1000)->Arg(100000);

void BM_BoundaryValue(benchmark::State& state) {
  const auto spec = three_atoms();
  for (auto _ : state) benchmark::DoNotOptimize(rmt::boundary_value(4.0, spec, 2.0));
}
BENCHMARK(BM_BoundaryValue);

void BM_SolveSpectrum(benchmark::State& state) {
  const auto spec = three_atoms();
  const double gamma = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rmt::solve_spectrum(spec, gamma));
}
BENCHMARK(BM_SolveSpectrum)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_PhiNormalization(benchmark::State& state) {
  const auto sol = rmt::solve_spectrum(three_atoms(), 2.0);
  const double l = 0.5 * (sol.support().back().lo + sol.support().back().hi);
  for (auto _ : state) benchmark::DoNotOptimize(rmt::phi_normalization(l, sol));
}
BENCHMARK(BM_PhiNormalization);

void BM_DeltaMoment(benchmark::State& state) {
  const auto sol = rmt::solve_spectrum(three_atoms(), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(rmt::delta_moment(sol));
}
BENCHMARK(BM_DeltaMoment);

}  // namespace
