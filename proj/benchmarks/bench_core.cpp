#include <benchmark/benchmark.h>

#include <cmath>

#include "fracham/nehari.hpp"
#include "fracham/spectral.hpp"

using namespace fracham;

namespace {

Field bump(const GridPtr& g) {
  return Field::sample(g, [](double x) { return 1.2 * std::exp(-x * x / 2); });
}

const NonlinearityFamily& family() {
  static const auto fam = builtin_family("cubic_exp", 1.0);
  return fam;
}

void BM_HalfLaplacian(benchmark::State& state) {
  auto g = make_grid(40.0, static_cast<std::size_t>(state.range(0)));
  const Field u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(apply_fractional_laplacian(u, SpectralExponent::half()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HalfLaplacian)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_Energy(benchmark::State& state) {
  auto g = make_grid(40.0, static_cast<std::size_t>(state.range(0)));
  const HalfForm form(g, 1.0);
  const PairField w(bump(g), 0.8 * bump(g));
  for (auto _ : state) benchmark::DoNotOptimize(energy(w, family(), form));
}
BENCHMARK(BM_Energy)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);

void BM_EnergyGradient(benchmark::State& state) {
  auto g = make_grid(40.0, static_cast<std::size_t>(state.range(0)));
  const HalfForm form(g, 1.0);
  const PairField w(bump(g), 0.8 * bump(g));
  for (auto _ : state) benchmark::DoNotOptimize(energy_gradient(w, family(), form));
}
BENCHMARK(BM_EnergyGradient)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);

void BM_InnerMaximize(benchmark::State& state) {
  auto g = make_grid(40.0, static_cast<std::size_t>(state.range(0)));
  const HalfForm form(g, 1.0);
  const auto fam = builtin_family("cubic_quintic_exp", 1.0);
  const PairField dir(bump(g), 0.5 * bump(g));
  SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(inner_maximize(dir, fam, form, cfg));
}
BENCHMARK(BM_InnerMaximize)->Arg(1 << 11)->Arg(1 << 13)->Unit(benchmark::kMillisecond);

void BM_GroundState(benchmark::State& state) {
  const HalfForm form(make_grid(40.0, 2048), 1.0);
  SolverConfig cfg;
  cfg.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(family(), form, cfg));
}
BENCHMARK(BM_GroundState)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
