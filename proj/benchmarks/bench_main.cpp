#include <benchmark/benchmark.h>

#include "kscatter/verify.hpp"

using namespace kscatter;

namespace {

Seed rank2_seed(std::int64_t s) { return Seed(SkewForm(2, {0, s, -s, 0}), {0, 1}); }

void BM_Complete(benchmark::State& state) {
  auto seed = rank2_seed(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(complete(seed, state.range(1)));
}
BENCHMARK(BM_Complete)->Args({1, 8})->Args({2, 6})->Args({2, 10})->Args({3, 6})->Unit(benchmark::kMillisecond);

void BM_SeriesPower(benchmark::State& state) {
  auto m = rank2_seed(1).monoid();
  TruncatedMonoidSeries f(m, LatticeVector{0, 0}, state.range(0));
  f.add_term(LatticeVector{0, 0}, 1);
  f.add_term(LatticeVector{1, 0}, 2);
  f.add_term(LatticeVector{0, 1}, 3);
  f.add_term(LatticeVector{1, 1}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(power(f, -7));
}
BENCHMARK(BM_SeriesPower)->Arg(8)->Arg(16)->Arg(24);

void BM_Theta(benchmark::State& state) {
  auto d = complete(rank2_seed(2), state.range(0));
  auto q = parse_rational_point("-5/7,-3/11");
  for (auto _ : state) benchmark::DoNotOptimize(theta(d, LatticeVector{1, 1}, q, state.range(0)));
}
BENCHMARK(BM_Theta)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_StructureConstants(benchmark::State& state) {
  MirrorAlgebra alg(complete(rank2_seed(state.range(0)), 5));
  std::vector<LatticeVector> ps{{1, 0}, {-1, 0}, {0, -1}};
  for (auto _ : state) benchmark::DoNotOptimize(alg.structure_constants(ps, 5));
}
BENCHMARK(BM_StructureConstants)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_ToricProduct(benchmark::State& state) {
  auto fan = Fan::blown_up_plane();
  auto phi = build_phi(fan);
  for (auto _ : state) benchmark::DoNotOptimize(toric_product(fan, phi, LatticeVector{2, -1}, LatticeVector{-3, 2}));
}
BENCHMARK(BM_ToricProduct);

void BM_Mutations(benchmark::State& state) {
  auto cs = ClusterSeed::from_seed(rank2_seed(2));
  std::vector<std::size_t> seq;
  for (int i = 0; i < state.range(0); ++i) seq.push_back(i % 2);
  for (auto _ : state) benchmark::DoNotOptimize(run_mutations(cs, seq));
}
BENCHMARK(BM_Mutations)->Arg(4)->Arg(8);

void BM_VerifyQuick(benchmark::State& state) {
  auto d = complete(rank2_seed(1), 6);
  VerifyOptions opt;
  opt.full = false;
  for (auto _ : state) benchmark::DoNotOptimize(verify_diagram(d, opt));
}
BENCHMARK(BM_VerifyQuick)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
