#include <benchmark/benchmark.h>

#include "rmt/simulate.hpp"
#include "rmt/stieltjes.hpp"

namespace {

rmt::SimulationConfig config(std::size_t n, std::size_t reps) {
  return {n, 2 * n, rmt::PopulationSpectrum::validate({{0.2, 1.0}, {0.4, 3.0}, {0.4, 10.0}}), reps, 11,
          rmt::EntryLaw::kRealGaussian};
}

// Draw plus symmetric eigendecomposition.
void BM_Generate(benchmark::State& state) {
  const auto c = config(static_cast<std::size_t>(state.range(0)), 1);
  std::size_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rmt::generate(c, rep++));
}
BENCHMARK(BM_Generate)->Arg(20)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RunPrial(benchmark::State& state) {
  const auto c = config(20, static_cast<std::size_t>(state.range(0)));
  const auto sol = rmt::solve_spectrum(c.spec, c.gamma());
  for (auto _ : state) benchmark::DoNotOptimize(rmt::run_prial(c, sol));
}
BENCHMARK(BM_RunPrial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
