#include <benchmark/benchmark.h>

#include <random>

#include "gpe/energy.hpp"
#include "gpe/minimizer.hpp"
#include "gpe/reference.hpp"
#include "gpe/spectral.hpp"

using namespace gpe;

namespace {

CondensateState bench_state(int N) {
  PhysicalParams p;
  p.epsilon = 0.1;
  p.delta = 1.5;
  p.Omega = 5.0;
  p.N1 = 0.5;
  p.N2 = 0.5;
  return make_state(make_discretization(build_grid(7.0, 4.0, N)), p, init::OffsetGaussian{-1.0, 0.0},
                    init::OffsetGaussian{1.0, 0.0});
}

void BM_fft_x_fast(benchmark::State& state) {
  const Grid g = build_grid(7.0, 4.0, static_cast<int>(state.range(0)));
  SpectralOps ops(g);
  std::mt19937_64 rng(1);
  const ComplexField v = reference::random_field(g.side(), rng, true);
  for (auto _ : state) benchmark::DoNotOptimize(ops.fft_x(v));
}

void BM_fft_x_literal(benchmark::State& state) {
  const Grid g = build_grid(7.0, 4.0, static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  const ComplexField v = reference::random_field(g.side(), rng, true);
  for (auto _ : state) benchmark::DoNotOptimize(reference::fft_x(g, v));
}

void BM_energy_fast(benchmark::State& state) {
  const CondensateState st = bench_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(total_energy(st, false));
}

void BM_energy_literal(benchmark::State& state) {
  const CondensateState st = bench_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::total_energy(st, false));
}

void BM_gradient(benchmark::State& state) {
  const CondensateState st = bench_state(static_cast<int>(state.range(0)));
  const EnergyEvaluation ev = evaluate_energy(st, false);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(st, false, ev));
}

void BM_epg_steps(benchmark::State& state) {
  const CondensateState st = bench_state(static_cast<int>(state.range(0)));
  SolverConfig cfg;
  cfg.maxIter = 10;
  for (auto _ : state) benchmark::DoNotOptimize(epg_minimize(st, cfg));
}

}  // namespace

BENCHMARK(BM_fft_x_fast)->Arg(30)->Arg(126)->Arg(254);
BENCHMARK(BM_fft_x_literal)->Arg(30)->Arg(126);
BENCHMARK(BM_energy_fast)->Arg(30)->Arg(126)->Arg(254);
BENCHMARK(BM_energy_literal)->Arg(30)->Arg(62);
BENCHMARK(BM_gradient)->Arg(126)->Arg(254);
BENCHMARK(BM_epg_steps)->Arg(126);

BENCHMARK_MAIN();
