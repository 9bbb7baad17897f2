#include <benchmark/benchmark.h>

#include "powers/free_family.hpp"
#include "powers/norm_bounds.hpp"
#include "powers/powers_engine.hpp"

namespace {

using namespace powers;

const GroupDescriptor& f2() {
  static GroupDescriptor g = GroupDescriptor::free_group(2);
  return g;
}

void BM_ReduceLongWord(benchmark::State& state) {
  std::vector<int> letters;
  for (int i = 0; i < 256; ++i) letters.push_back((i % 2 == 0 ? 1 : -1) * (1 + (i % 2)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduce(f2(), letters));
  }
}
BENCHMARK(BM_ReduceLongWord);

void BM_MulWords(benchmark::State& state) {
  Word x = parse_word("abababababAB", f2());
  Word y = parse_word("BAbababababa", f2());
  for (auto _ : state) {
    benchmark::DoNotOptimize(mul(x, y));
  }
}
BENCHMARK(BM_MulWords);

void BM_BallEnumeration(benchmark::State& state) {
  int radius = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ball(f2(), radius));
  }
}
BENCHMARK(BM_BallEnumeration)->Arg(6)->Arg(8);

void BM_ExactConvolutionPower(benchmark::State& state) {
  AlgebraElement kesten = parse_element("(1/4)(a+A+b+B)", f2());
  AlgebraElement b = convolve(adjoint(kesten), kesten);
  for (auto _ : state) {
    AlgebraElement p = b;
    for (int i = 0; i < 3; ++i) p = convolve(p, b);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_ExactConvolutionPower);

void BM_PowerIterationLowerBound(benchmark::State& state) {
  AlgebraElement kesten = parse_element("(1/4)(a+A+b+B)", f2());
  BoundConfig cfg;
  cfg.radius = static_cast<int>(state.range(0));
  cfg.max_iterations = 50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lower_bound_power(kesten, cfg));
  }
}
BENCHMARK(BM_PowerIterationLowerBound)->Arg(6)->Arg(8);

void BM_CertifiedUpperConjugateAverage(benchmark::State& state) {
  Word a = parse_word("a", f2());
  std::vector<Word> pool = geometric_conjugators(parse_word("b", f2()), static_cast<int>(state.range(0)));
  std::vector<Rational> w(pool.size(), Rational(1) / Rational(static_cast<long>(pool.size())));
  AlgebraElement avg = conjugate_average({a}, pool, w).per_target.front();
  BoundConfig bounds;
  bounds.power_depth = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(certified_upper_bound(avg, bounds));
  }
}
BENCHMARK(BM_CertifiedUpperConjugateAverage)->Arg(4)->Arg(12);

void BM_FoldingRank(benchmark::State& state) {
  std::vector<Word> family;
  Word cur = parse_word("b", f2());
  for (int k = 1; k <= 16; ++k) {
    family.push_back(conjugate(cur, parse_word("a", f2())));
    cur = mul(cur, parse_word("b", f2()));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(subgroup_rank(family));
  }
}
BENCHMARK(BM_FoldingRank);

}  // namespace

BENCHMARK_MAIN();
