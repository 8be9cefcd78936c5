#include "xbf/fixed_time.hpp"
#include "xbf/hartman_watson.hpp"
#include "xbf/monte_carlo.hpp"
#include "xbf/moments.hpp"
#include "xbf/random_laws.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_ThetaOscillatory(benchmark::State &state) {
  xbf::ThetaEngine engine;
  engine.method = xbf::ThetaMethod::oscillatory;
  for (auto _ : state) {
    benchmark::DoNotOptimize(xbf::theta(xbf::HwQuery{1.0, 1.0}, engine).value);
  }
}
BENCHMARK(BM_ThetaOscillatory);

void BM_ThetaContour(benchmark::State &state) {
  xbf::ThetaEngine engine;
  engine.method = xbf::ThetaMethod::contour;
  for (auto _ : state) {
    benchmark::DoNotOptimize(xbf::theta(xbf::HwQuery{1.0, 0.1}, engine).value);
  }
}
BENCHMARK(BM_ThetaContour);

void BM_ReciprocalDensity(benchmark::State &state) {
  const auto method = static_cast<xbf::ReciprocalMethod>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(xbf::f_reciprocal(xbf::LawQuery{0.0, 1.0}, 1.0, method).value);
  }
}
BENCHMARK(BM_ReciprocalDensity)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_DensityOfA(benchmark::State &state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(xbf::density_of_A(xbf::LawQuery{0.5, 2.0}, 0.7).value);
  }
}
BENCHMARK(BM_DensityOfA)->Unit(benchmark::kMicrosecond);

void BM_LaplaceOfA(benchmark::State &state) {
  const auto method = static_cast<xbf::LaplaceMethod>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(xbf::laplace_of_A(xbf::LawQuery{0.0, 1.0}, 1.0, method).value);
  }
}
BENCHMARK(BM_LaplaceOfA)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_MomentExact(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(xbf::moment_exact(xbf::MomentQuery{0.3, 1.0, n, 0.0}));
  }
}
BENCHMARK(BM_MomentExact)->Arg(3)->Arg(30);

void BM_GigSample(benchmark::State &state) {
  const xbf::GigParams g{0.5, 1.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(xbf::gig_sample(g, 10000, 7));
  }
}
BENCHMARK(BM_GigSample)->Unit(benchmark::kMillisecond);

void BM_SimulateA(benchmark::State &state) {
  xbf::SimConfig cfg;
  cfg.n_paths = 1024;
  cfg.n_steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(xbf::simulate_A(0.0, 1.0, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cfg.n_paths * cfg.n_steps));
}
BENCHMARK(BM_SimulateA)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
