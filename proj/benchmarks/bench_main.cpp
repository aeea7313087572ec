#include <benchmark/benchmark.h>

#include "dagiso/classify.hpp"
#include "dagiso/isodag.hpp"
#include "dagiso/variety.hpp"

using namespace dagiso;

namespace {

void BM_Determinant(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PrimeField f(kMersenne31);
  Rng rng(1);
  FieldMatrix<PrimeField> m(n, n, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rng() % f.modulus();
  for (auto _ : state) benchmark::DoNotOptimize(determinant(f, m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Determinant)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNCubed);

void BM_SamplePoint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const Dag g = random_dag(n, 2 * static_cast<std::size_t>(n), rng);
  const PrimeField f(kMersenne31);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_point(g, f, seed++));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SamplePoint)->Arg(10)->Arg(25)->Arg(50)->Arg(100)->Arg(200)->Complexity();

void BM_EquivRandomized(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const Dag g = random_dag(n, 2 * static_cast<std::size_t>(n), rng);
  const IsoParams p = make_params(g, g, 3);
  for (auto _ : state) benchmark::DoNotOptimize(equiv_randomized(g, g, p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EquivRandomized)->Arg(25)->Arg(50)->Arg(100)->Arg(200)->Complexity();

void BM_IsodagRelabeled(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  const Dag g = random_dag(n, static_cast<std::size_t>(n), rng);
  std::vector<Node> map(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) map[static_cast<std::size_t>(v)] = (v + 1) % n;
  const Dag h = apply_permutation(g, Permutation(map));
  const IsoParams p = make_params(g, h, 3);
  for (auto _ : state) benchmark::DoNotOptimize(isodag_test(g, h, p));
}
BENCHMARK(BM_IsodagRelabeled)->DenseRange(4, 8, 2);

void BM_ClassifyTrees(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto mode = state.range(1) == 0 ? ClassifyMode::kOracle : ClassifyMode::kRandomized;
  for (auto _ : state) benchmark::DoNotOptimize(classify_trees(n, mode));
}
BENCHMARK(BM_ClassifyTrees)->Args({5, 0})->Args({5, 1})->Args({6, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
