#include <benchmark/benchmark.h>

#include <random>

#include "lowcon/congestion.hpp"
#include "lowcon/raster.hpp"
#include "lowcon/solver.hpp"

using namespace lowcon;

namespace {

const EnvelopePair& envelope() {
  static const EnvelopePair e(CongestionFunction(1.0, 2.0),
                              CongestionFunction(4.0, 2.0), 0.06);
  return e;
}

void BM_envelope_dual(benchmark::State& state) {
  const EnvelopePair& e = envelope();
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> mm(0.0, 2.0);
  std::vector<double> ms(4096);
  for (double& m : ms) m = mm(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.dual(ms[i++ & 4095]));
  }
}
BENCHMARK(BM_envelope_dual);

void BM_objective_and_gradient(benchmark::State& state) {
  const Grid g(30, 30);
  const ScalarField f = build_source(g, {0.02, {0.3, 0.3}, {0.7, 0.7}});
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> d(-0.2, 0.2);
  ScalarField u(g);
  for (double& v : u.values()) v = d(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(objective(u, f, envelope(), 1e-4));
    benchmark::DoNotOptimize(objective_gradient(u, f, envelope(), {}, 1e-4));
  }
}
BENCHMARK(BM_objective_and_gradient);

void BM_solve_30x30(benchmark::State& state) {
  const Grid g(30, 30);
  const ScalarField f = build_source(g, {0.02, {0.3, 0.3}, {0.7, 0.7}});
  SolverConfig cfg;
  cfg.smoothing_width = 1e-4;
  cfg.gap_tolerance = 1e-4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize(f, envelope(), cfg));
  }
}
BENCHMARK(BM_solve_30x30)->Unit(benchmark::kMillisecond);

void BM_dilate_512(benchmark::State& state) {
  RasterSet set(512, 1.0 / 512);
  set.fill_disc(0.4, 0.4, 0.05);
  set.fill_segment(0.35, 0.6, 0.65, 0.55, 0.03);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dilate(set, 0.05));
  }
}
BENCHMARK(BM_dilate_512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
