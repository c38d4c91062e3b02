#include <benchmark/benchmark.h>

#include <random>

#include "koranyi/maximal.hpp"
#include "koranyi/special.hpp"
#include "koranyi/spherical.hpp"
#include "koranyi/squarefn.hpp"

using namespace koranyi;

static void BM_Multiply(benchmark::State& st) {
  const auto d = Dimensions::of(static_cast<int>(st.range(0)));
  std::mt19937_64 rng(1);
  const auto n = random_element(d, rng), m = random_element(d, rng);
  for (auto _ : st) benchmark::DoNotOptimize(multiply(n, m));
}
BENCHMARK(BM_Multiply)->Arg(2)->Arg(4)->Arg(8);

static void BM_Laguerre(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  double x = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(laguerre_fn(n, x));
    x = x < 400 ? x + 0.37 : 0.1;
  }
}
BENCHMARK(BM_Laguerre)->Arg(5)->Arg(50)->Arg(200);

static void BM_ReducedBessel(benchmark::State& st) {
  const double s = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(reduced_bessel(2.0, s));
}
BENCHMARK(BM_ReducedBessel)->Arg(1)->Arg(20)->Arg(200);

static void BM_ComplexGamma(benchmark::State& st) {
  double y = 1.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(complex_gamma(1.5, y));
    y = y < 50 ? y + 0.1 : 1.0;
  }
}
BENCHMARK(BM_ComplexGamma);

static void BM_Pairing(benchmark::State& st) {
  const auto p = SphericalParam::make(Dimensions::of(static_cast<int>(st.range(0))), st.range(0) == 5 ? 0.8 : 0.0,
                                      {2.0, 1.0}, {1, 0});
  for (auto _ : st) benchmark::DoNotOptimize(pairing_mu_s_phi(p, 1.3));
}
BENCHMARK(BM_Pairing)->Arg(4)->Arg(5)->Unit(benchmark::kMicrosecond);

static void BM_PairingDerivs(benchmark::State& st) {
  const auto p = SphericalParam::make(Dimensions::of(4), 0.0, {2.0, 1.0}, {1, 0});
  const auto plan = make_pairing_plan(p, 1.3);
  for (auto _ : st) benchmark::DoNotOptimize(pairing_derivs(plan, 1.3, 3));
}
BENCHMARK(BM_PairingDerivs)->Unit(benchmark::kMicrosecond);

static void BM_Shat(benchmark::State& st) {
  const auto p = SphericalParam::make(Dimensions::of(4), 0.0, {2.0, 1.0}, {0, 1});
  for (auto _ : st) benchmark::DoNotOptimize(shat(p, static_cast<int>(st.range(0))).value);
}
BENCHMARK(BM_Shat)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_SphericalAverage(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto f = random_bumps(n, 4.0, 3, 1.0, 5);
  const auto rule = grid_sphere_rule(8, 16);
  for (auto _ : st) benchmark::DoNotOptimize(spherical_average(f, 0.8, rule, Interior{1.5}));
}
BENCHMARK(BM_SphericalAverage)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_StandardMaximal(benchmark::State& st) {
  const auto f = random_bumps(32, 4.0, 3, 1.0, 5);
  for (auto _ : st) benchmark::DoNotOptimize(standard_maximal(f, RadiiLadder(0.2, 1.25, 6), Interior{1.5}));
}
BENCHMARK(BM_StandardMaximal)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
