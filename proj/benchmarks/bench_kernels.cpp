#include <benchmark/benchmark.h>

#include <vector>

#include "tomokernel/markov_kernels.hpp"
#include "tomokernel/quantum_states.hpp"
#include "tomokernel/special_functions.hpp"

using namespace tomokernel;

static void BM_HermiteFunctions(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> out(n + 1);
  double x = 0.3;
  for (auto _ : state) {
    hermite_functions(n, x, out.data());
    benchmark::DoNotOptimize(out.data());
    x += 1e-9;
  }
  state.SetItemsProcessed(state.iterations() * (n + 1));
}
BENCHMARK(BM_HermiteFunctions)->Arg(16)->Arg(256)->Arg(1024);

static void BM_Dawson(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0)) / 4.0;
  for (auto _ : state) benchmark::DoNotOptimize(dawson(r));
}
BENCHMARK(BM_Dawson)->Arg(2)->Arg(20)->Arg(100);

static void BM_YDerivative(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(y_derivative(p, 2.7));
}
BENCHMARK(BM_YDerivative)->Arg(0)->Arg(4)->Arg(16);

static void BM_MBase(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(m_base(3, 5, r));
}
BENCHMARK(BM_MBase)->Arg(1)->Arg(8)->Arg(60);

static void BM_KernelDensity(benchmark::State& state) {
  const auto mode = state.range(0) ? KernelDensity::Evaluation::tabulated : KernelDensity::Evaluation::exact;
  const CahillGlauberParam p{1.0 / 3.0};
  const KernelDensity kd(cahill_glauber_kernel(p, cahill_glauber_dim(p, 1e-12), 1e-12), {}, mode);
  double r = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kd(0.2, -0.4, 1.1, r));
    r += 1e-6;
  }
}
BENCHMARK(BM_KernelDensity)->Arg(0)->Arg(1);

static void BM_OrthogonalityMatrix(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(orthogonality_matrix(static_cast<int>(state.range(0))).max_deviation());
}
BENCHMARK(BM_OrthogonalityMatrix)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
