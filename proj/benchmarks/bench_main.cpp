#include <benchmark/benchmark.h>

#include <cmath>

#include "reveuler/convolution.hpp"
#include "reveuler/diagnostics.hpp"
#include "reveuler/spectral.hpp"

using namespace reveuler;

namespace {

ScalarField bump(int n) {
  return sample(GridSpec{8.0, n}, [](const Point3& x) { return std::exp(-x.norm2()) * (1.0 + x.x1); });
}

void BM_ForwardInverse(benchmark::State& st) {
  const ScalarField f = bump(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(inverse(forward(f)));
}
BENCHMARK(BM_ForwardInverse)->Arg(32)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_HeatConvolve(benchmark::State& st) {
  const ScalarField f = bump(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(heat_convolve(f, 1e-2, 0.5));
}
BENCHMARK(BM_HeatConvolve)->Arg(32)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_DuhamelPush(benchmark::State& st) {
  const ScalarField f = bump(static_cast<int>(st.range(0)));
  const Spectrum s = forward(f);
  DuhamelAccumulator acc(f.grid(), 1e-2);
  double t = 0.0;
  for (auto _ : st) {
    acc.push(t, s);
    t += 1e-3;
  }
}
BENCHMARK(BM_DuhamelPush)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PressureQuadrature(benchmark::State& st) {
  const ScalarField s = spectral_upsample(bump(static_cast<int>(st.range(0))), 2);
  for (auto _ : st) benchmark::DoNotOptimize(leray_grad_quadrature(s, {0.3, -0.2, 0.7}));
}
BENCHMARK(BM_PressureQuadrature)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
