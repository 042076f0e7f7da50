// Serial vs OpenMP timings for the three parallel kernels.
// Each pair runs the same inputs; the serial variant is the reference path.

#include "dmsfi/rates.hpp"
#include "dmsfi/scenario.hpp"
#include "dmsfi/units.hpp"
#include "dmsfi/wforacle.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace dmsfi;

namespace {

LaserField short_pulse() {
  LaserParams p;
  p.wavelength_nm = 900;
  p.intensity_W_cm2 = 2e14;
  p.fwhm_fs = 3.7;
  p.envelope = EnvelopeKind::Gaussian;
  return LaserField(p);
}

std::vector<double> gamma_nodes(int n) {
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = std::exp(std::log(0.05) + std::log(200.0) * k / (n - 1));
  return g;
}

void log_A_table(benchmark::State& state, bool parallel) {
  const auto g = gamma_nodes(static_cast<int>(state.range(0)));
  const double omega = units::wavelength_to_omega(800);
  for (auto _ : state) benchmark::DoNotOptimize(tabulate_log_A(omega, 0.5, 0, g, parallel));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void slices(benchmark::State& state, bool parallel) {
  const auto n2 = load_molecule("n2").with_theta(units::kPi / 4);
  const IonizationModel model(n2, short_pulse());
  const auto s = wforacle::birth_slices(model, wforacle::birth_grid(model.field(), static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(wforacle::slice_sum(s, parallel));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.size()));
}

void sweep(benchmark::State& state, int threads) {
  const auto s = scenario::load_scenario(DMSFI_SOURCE_DIR "/scenarios/h_intensity.json");
  const auto h = load_molecule(s.molecule);
  for (auto _ : state) benchmark::DoNotOptimize(scenario::run_all(s, h, threads, false));
}

}  // namespace

BENCHMARK_CAPTURE(log_A_table, serial, false)->Arg(512);
BENCHMARK_CAPTURE(log_A_table, omp, true)->Arg(512);
BENCHMARK_CAPTURE(slices, serial, false)->Arg(640);
BENCHMARK_CAPTURE(slices, omp, true)->Arg(640);
BENCHMARK_CAPTURE(sweep, serial, 1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, omp, 0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
