#include <benchmark/benchmark.h>

#include "soscert/construction.hpp"
#include "soscert/gram.hpp"
#include "soscert/groebner.hpp"
#include "soscert/linalg.hpp"
#include "soscert/positivity.hpp"

using namespace soscert;
namespace cx = soscert::construction;

namespace {

void BM_TowerMultiply(benchmark::State& state) {
  const AlgebraicNumber a = parse_algebraic("1/3 + 2*a - 5/7*a^2*b + b");
  const AlgebraicNumber b = parse_algebraic("-4 + a^2 + 3/2*a*b");
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_TowerMultiply);

void BM_TowerSign(benchmark::State& state) {
  const auto& t = beta_roots().front();
  const AlgebraicNumber a = parse_algebraic("1 - a + 7/10*b");
  for (auto _ : state) benchmark::DoNotOptimize(sign(a, t));
}
BENCHMARK(BM_TowerSign);

void BM_ExpandF(benchmark::State& state) {
  const auto p1 = cx::p1(), p2 = cx::p2(), p3 = cx::p3();
  for (auto _ : state) benchmark::DoNotOptimize(p1 * p1 + p2 * p2 + p3 * p3);
}
BENCHMARK(BM_ExpandF);

void BM_PsdDecideQy(benchmark::State& state) {
  const QMatrix q = cx::q_y();
  for (auto _ : state) benchmark::DoNotOptimize(psd_decide(q));
}
BENCHMARK(BM_PsdDecideQy);

void BM_AnnihilatorSpaceBlockF(benchmark::State& state) {
  const std::vector<KPoly> ps{cx::p1(), cx::p2(), cx::p3()};
  for (auto _ : state) benchmark::DoNotOptimize(annihilator_space<AlgebraicNumber>(ps, {0, 1, 2, 3}, 4));
}
BENCHMARK(BM_AnnihilatorSpaceBlockF)->Unit(benchmark::kMillisecond);

void BM_RationalIntersection(benchmark::State& state) {
  const auto us = cx::kernel_us();
  for (auto _ : state) benchmark::DoNotOptimize(rational_intersection(us, 10));
}
BENCHMARK(BM_RationalIntersection)->Unit(benchmark::kMillisecond);

void BM_GroebnerJacobianTruncated(benchmark::State& state) {
  const auto h = reduce_mod_p(cx::h());
  Ideal<Fp> ideal{jacobian_generators(h)};
  GroebnerOptions o;
  o.degree_bound = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(buchberger(ideal, o));
}
BENCHMARK(BM_GroebnerJacobianTruncated)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_BnbF0(benchmark::State& state) {
  const QPoly f0 = substitute(cx::f(), std::map<std::size_t, QPoly>{{2, QPoly(cx::vars())}});
  for (auto _ : state) benchmark::DoNotOptimize(interval_bnb(f0, {0, 1, 3}));
}
BENCHMARK(BM_BnbF0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
