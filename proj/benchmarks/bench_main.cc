#include <benchmark/benchmark.h>

#include "sdl/plan.h"
#include "sdl/regularity.h"
#include "sdl/setarith.h"
#include "sdl/vc.h"

namespace {

using namespace sdl;

void BM_ProductSet(benchmark::State& state) {
  const GroupPtr g = FiniteGroup::cyclic(static_cast<std::uint32_t>(state.range(0)));
  const GroupSet a = random_set(g, g->order() / 8, 1);
  const GroupSet b = random_set(g, g->order() / 8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(product_set(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProductSet)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_ProductSetNonabelian(benchmark::State& state) {
  const GroupPtr g = symmetric_group(5);
  const GroupSet a = random_set(g, static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(product_set(a, a));
}
BENCHMARK(BM_ProductSetNonabelian)->Arg(8)->Arg(32);

void BM_TranslateVc(benchmark::State& state) {
  const GroupPtr g = FiniteGroup::cyclic(static_cast<std::uint32_t>(state.range(0)));
  const GroupSet a = random_set(g, g->order() / 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(vc_dimension(TranslateFamily{a, Side::kLeft, std::nullopt}));
}
BENCHMARK(BM_TranslateVc)->Arg(16)->Arg(32)->Arg(64);

void BM_IsStable(benchmark::State& state) {
  const GroupPtr g = FiniteGroup::abelian(std::vector<std::uint32_t>(static_cast<std::size_t>(state.range(0)), 2));
  const GroupSet a = planted_set(g, {1, 2}, 2, Rational(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(is_d_stable(a, 2));
}
BENCHMARK(BM_IsStable)->DenseRange(4, 7);

void BM_RegularizeExponent(benchmark::State& state) {
  const GroupPtr g = FiniteGroup::abelian(std::vector<std::uint32_t>(static_cast<std::size_t>(state.range(0)), 2));
  const GroupSet a = planted_set(g, {1, 2, 4}, 3, Rational(1, 8), 6);
  for (auto _ : state) benchmark::DoNotOptimize(regularize_exponent(a, Rational(1, 2)));
}
BENCHMARK(BM_RegularizeExponent)->DenseRange(5, 8);

void BM_VerifyCertificate(benchmark::State& state) {
  const GroupPtr g = FiniteGroup::abelian(std::vector<std::uint32_t>(8, 2));
  const RegularityCertificate c = regularize_exponent(planted_set(g, {1, 2, 4}, 3, Rational(1, 8), 6), Rational(1, 2));
  for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(c));
}
BENCHMARK(BM_VerifyCertificate);

}  // namespace

BENCHMARK_MAIN();
