#include <benchmark/benchmark.h>

#include <cmath>

#include "tomokernel/quantum_states.hpp"
#include "tomokernel/reconstruction.hpp"
#include "tomokernel/transforms.hpp"

using namespace tomokernel;

namespace {

PhaseField gaussian(int n) {
  return PhaseField::sample(GridSpec{-8, 8, n, -8, 8, n},
                            [](double q, double p) { return cplx(std::exp(-q * q - p * p), 0.0); });
}

}  // namespace

static void BM_Hilbert(benchmark::State& state) {
  const int nr = static_cast<int>(state.range(0));
  const Profile psi = Profile::sample(20.0, nr, [](double r) { return cplx(std::exp(-r * r), 0.0); });
  for (auto _ : state) benchmark::DoNotOptimize(hilbert(psi).values.data());
}
BENCHMARK(BM_Hilbert)->Arg(1024)->Arg(1 << 14);

static void BM_Radon(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PhaseField f = gaussian(n);
  const SinogramSpec s{n, 4 * n, 8.0};
  for (auto _ : state) benchmark::DoNotOptimize(radon(f, s).values.data());
}
BENCHMARK(BM_Radon)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_RadonInverse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SinogramSpec s{n, 4 * n, 8.0};
  const Sinogram phi = Sinogram::sample(s, [](double, double r) { return cplx(std::sqrt(M_PI) * std::exp(-r * r), 0.0); });
  const GridSpec g{-8, 8, n, -8, 8, n};
  for (auto _ : state) benchmark::DoNotOptimize(radon_inverse(phi, g).values.data());
}
BENCHMARK(BM_RadonInverse)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Convolve2d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PhaseField f = gaussian(n);
  for (auto _ : state) benchmark::DoNotOptimize(convolve2d(f, f).values.data());
}
BENCHMARK(BM_Convolve2d)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

static void BM_Wigner(benchmark::State& state) {
  const FockOperator T = cat_state(static_cast<int>(state.range(0)));
  const GridSpec g{-8, 8, 128, -8, 8, 128};
  for (auto _ : state) benchmark::DoNotOptimize(wigner(T, g).values.data());
}
BENCHMARK(BM_Wigner)->Arg(2)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_ReconstructPoint(benchmark::State& state) {
  const Sinogram data = tomographic_sinogram(cat_state(), SinogramSpec{});
  const FockOperator K = fock_projector(0, 0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_density(data, K, {{0.3, -0.2}}));
}
BENCHMARK(BM_ReconstructPoint)->Unit(benchmark::kMillisecond);
