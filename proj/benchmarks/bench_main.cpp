#include <benchmark/benchmark.h>

#include <random>

#include "wva/allan.hpp"
#include "wva/ccd.hpp"
#include "wva/diffraction.hpp"
#include "wva/noisegen.hpp"
#include "wva/polarization.hpp"
#include "wva/registration.hpp"
#include "wva/rng.hpp"
#include "wva/units.hpp"

namespace {

wva::GridSpec detector(std::size_t rows, std::size_t cols) { return {rows, cols, 1.85e-6}; }

wva::IntensityMap pattern(std::size_t rows, std::size_t cols, double tau) {
  const wva::OpticalGeometry g;
  const auto fields = wva::compute_arm_fields(g, detector(rows, cols));
  const wva::SelectionConfig s{wva::deg_to_rad(1.6), wva::deg_to_rad(-1.6)};
  return wva::interference_intensity(fields, s, tau, wva::angular_frequency(g.wavelength));
}

void BM_ClosedFormFields(benchmark::State& state) {
  const wva::OpticalGeometry g;
  const auto out = detector(static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(wva::compute_arm_fields(g, out));
}
BENCHMARK(BM_ClosedFormFields)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_NumericPropagation(benchmark::State& state) {
  const wva::OpticalGeometry g;
  const auto lens = wva::lens_grid(g, static_cast<std::size_t>(state.range(0)));
  const auto [upper, lower] = wva::slit_fields(g, lens);
  const auto out = detector(256, 64);
  for (auto _ : state) benchmark::DoNotOptimize(wva::propagate_numeric(upper, g, out));
}
BENCHMARK(BM_NumericPropagation)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Expose(benchmark::State& state) {
  const auto img = pattern(1024, 64, 1.69e-18);
  wva::CcdSpec spec;
  spec.rows = 1024;
  spec.cols = 64;
  const double n_r = static_cast<double>(state.range(0));
  const wva::PhotonSampler sampler(img, n_r, spec);
  wva::Rng rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.expose(rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Expose)->Arg(36000)->Arg(6000000)->Unit(benchmark::kMicrosecond);

void BM_Register(benchmark::State& state) {
  const auto cols = static_cast<std::size_t>(state.range(0));
  const auto ref = pattern(1024, cols, 1.69e-18);
  const auto moving = pattern(1024, cols, 1.75e-18);
  wva::RegistrationOptions opt;
  opt.upsample = static_cast<int>(state.range(1));
  const wva::Registrar reg(ref, opt);
  for (auto _ : state) benchmark::DoNotOptimize(reg.estimate(moving));
}
BENCHMARK(BM_Register)->Args({1, 100})->Args({64, 100})->Args({64, 1000})->Unit(benchmark::kMicrosecond);

void BM_AllanCurve(benchmark::State& state) {
  wva::Rng rng(3);
  std::normal_distribution<double> normal;
  wva::TimeSeries s{std::vector<double>(static_cast<std::size_t>(state.range(0))), 0.01, 0};
  for (double& v : s.samples) v = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(wva::allan_curve(s));
}
BENCHMARK(BM_AllanCurve)->Arg(1 << 14)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

void BM_PowerLaw(benchmark::State& state) {
  wva::Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(wva::gen_powerlaw(1.0, static_cast<std::size_t>(state.range(0)), 1e-3, 0.01, rng));
}
BENCHMARK(BM_PowerLaw)->Arg(1 << 14)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
