#include <vector>

#include <benchmark/benchmark.h>

#include "lte/exactsim.hpp"
#include "lte/schemes.hpp"
#include "lte/semigroup.hpp"

namespace {

void BM_Philox(benchmark::State& state) {
  lte::RngStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng());
}
BENCHMARK(BM_Philox);

void BM_Normal(benchmark::State& state) {
  lte::RngStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_Normal);

void BM_ExactStep(benchmark::State& state) {
  const auto model = lte::ModelSpec::allen_cahn();
  const lte::RngStream root(1, 0);
  std::uint64_t i = 0;
  for (auto _ : state) {
    lte::RngStream s = root.child(i++);
    benchmark::DoNotOptimize(lte::exact_step(model, 8.0, 0.3, 1.0 / 4096, s));
  }
}
BENCHMARK(BM_ExactStep);

void BM_ExactStepper(benchmark::State& state) {
  const auto model = lte::ModelSpec::allen_cahn();
  const lte::ExactStepper step(model, 8.0, 1.0 / 4096);
  const lte::RngStream root(1, 0);
  std::uint64_t i = 0;
  for (auto _ : state) {
    lte::RngStream s = root.child(i++);
    benchmark::DoNotOptimize(step(0.3, s));
  }
}
BENCHMARK(BM_ExactStepper);

void BM_Semigroup(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const int threshold = state.range(1) ? 2 : 1 << 30;
  const lte::SemigroupApplicator app(N, threshold);
  const auto prop = app.propagator(1e-3);
  std::vector<double> v(N - 1, 0.5), out(N - 1);
  for (auto _ : state) {
    prop.apply(v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetLabel(threshold == 2 ? "fftw" : "direct");
}
BENCHMARK(BM_Semigroup)->ArgsProduct({{16, 64, 128, 256}, {0, 1}});

void BM_Step(benchmark::State& state) {
  const auto scheme = static_cast<lte::Scheme>(state.range(0));
  const auto model = lte::ModelSpec::allen_cahn();
  // dt N^2 = 1/4 keeps the explicit scheme stable.
  const lte::Grid grid(64, 4096, 0.25);
  lte::Stepper stepper(scheme, model, grid, 1.0);
  const lte::RngStream path(1, 0);
  const auto init = lte::initial_state(model, grid);
  std::vector<double> u = init;
  int m = 0;
  for (auto _ : state) {
    stepper.step(m++ % grid.M(), u, path);
    if (scheme != lte::Scheme::LTE && m % 64 == 0) u = init;
  }
  state.SetLabel(std::string(lte::scheme_name(scheme)));
  state.SetItemsProcessed(state.iterations() * (grid.N() - 1));
}
BENCHMARK(BM_Step)->DenseRange(0, 3);

}  // namespace
BENCHMARK_MAIN();
