#include <benchmark/benchmark.h>

#include "snts/changepoint.hpp"
#include "snts/inference.hpp"
#include "snts/lrv.hpp"
#include "snts/simgen.hpp"

using namespace snts;

namespace {

TimeSeries sample(std::size_t n) {
  SimModel m;
  m.n = n;
  m.sigma = SigmaProfile::a1();
  m.error = ErrorModel::b1(0.4);
  m.seed = 42;
  return generate(m);
}

}  // namespace

static void BM_Generate(benchmark::State& state) {
  SimModel m;
  m.n = static_cast<std::size_t>(state.range(0));
  m.sigma = SigmaProfile::a2();
  m.error = ErrorModel::b2(3.0);
  for (auto _ : state) {
    ++m.seed;
    benchmark::DoNotOptimize(generate(m));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Arg(120)->Arg(1200);

static void BM_LrvSelfnorm(benchmark::State& state) {
  const auto x = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lrv_selfnorm_value(x.values(), 10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LrvSelfnorm)->Arg(120)->Arg(5000);

static void BM_SnScan(benchmark::State& state) {
  const auto x = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sn_scan(x, 0.1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SnScan)->Arg(120)->Arg(5000);

static void BM_WildBootstrapCi(benchmark::State& state) {
  const auto x = sample(120);
  const auto B = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wb_ci(x, 0.05, 10, MultiplierLaw{}, {B, 7, 1}));
}
BENCHMARK(BM_WildBootstrapCi)->Arg(500);

static void BM_SnTest(benchmark::State& state) {
  const auto x = sample(120);
  ChangePointOptions o;
  o.bootstrap = {static_cast<std::size_t>(state.range(0)), 7, 1};
  for (auto _ : state) benchmark::DoNotOptimize(sn_test(x, o));
}
BENCHMARK(BM_SnTest)->Arg(500);

static void BM_ClassicalTest(benchmark::State& state) {
  const auto x = sample(120);
  ChangePointOptions o;
  o.bootstrap = {static_cast<std::size_t>(state.range(0)), 7, 1};
  for (auto _ : state) benchmark::DoNotOptimize(classical_test(x, CusumTest::T1, o));
}
BENCHMARK(BM_ClassicalTest)->Arg(500);

BENCHMARK_MAIN();
