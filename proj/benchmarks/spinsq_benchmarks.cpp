#include <random>

#include <benchmark/benchmark.h>

#include "spinsq/spinsq.hpp"

using namespace spinsq;

namespace {

// One pass over the amplitudes yields every Bloch vector and pair correlation.
void BM_MarginalsOfPureState(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const PureState psi = random_pure_state(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(Marginals::of(psi));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MarginalsOfPureState)->DenseRange(12, 16, 2)->Unit(benchmark::kMillisecond);

void BM_XiTildeGeneral(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Marginals m = Marginals::of(random_pure_state(static_cast<int>(state.range(0)), rng));
  for (auto _ : state) benchmark::DoNotOptimize(xi_tilde_general(m));
}
BENCHMARK(BM_XiTildeGeneral)->Arg(2)->Arg(6)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_XiTildeSymmetricLargeN(benchmark::State& state) {
  const SymmetricState s = one_axis_twisted_state(static_cast<int>(state.range(0)), 0.02);
  for (auto _ : state) benchmark::DoNotOptimize(xi_tilde_symmetric(s));
}
BENCHMARK(BM_XiTildeSymmetricLargeN)->Arg(100)->Arg(1000)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_AnalyzeTwisted(benchmark::State& state) {
  const StateFile file(one_axis_twisted_state(static_cast<int>(state.range(0)), 0.05));
  const std::string bytes = file.serialize();
  for (auto _ : state) benchmark::DoNotOptimize(analyze(file, bytes));
}
BENCHMARK(BM_AnalyzeTwisted)->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BruteForceOracle(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const SymmetricState s = random_symmetric_state(static_cast<int>(state.range(0)), rng);
  const auto dirs = bloch_directions(Marginals::of(s));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_min_variance(s, dirs, 128));
}
BENCHMARK(BM_BruteForceOracle)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another GCC build.
BENCHMARK_MAIN();
