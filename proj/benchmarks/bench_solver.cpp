#include <benchmark/benchmark.h>

#include "npg/problems.hpp"
#include "npg/prox.hpp"
#include "npg/solver.hpp"
#include "npg/splitmix64.hpp"

namespace {

void solve_lasso(benchmark::State& state, npg::Variant variant) {
  const auto problem = npg::problems::make_lasso({});
  npg::SolverConfig c;
  c.variant = variant;
  c.m = 5;
  c.p_min = 0.9;
  std::size_t iters = 0;
  for (auto _ : state) {
    const auto r = npg::solve(problem, c);
    iters = r.trace.size();
    benchmark::DoNotOptimize(r.x_final.data());
  }
  state.counters["iterations"] = static_cast<double>(iters);
}

void BM_LassoMonotone(benchmark::State& s) { solve_lasso(s, npg::Variant::monotone); }
void BM_LassoAverage(benchmark::State& s) { solve_lasso(s, npg::Variant::average); }
void BM_LassoMax(benchmark::State& s) { solve_lasso(s, npg::Variant::max); }

void BM_ProxL1(benchmark::State& state) {
  npg::SplitMix64 rng(5);
  npg::Vector v(state.range(0));
  for (auto& x : v) x = rng.normal();
  for (auto _ : state) {
    auto out = npg::prox::l1(v, 0.3);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_LassoMonotone);
BENCHMARK(BM_LassoAverage);
BENCHMARK(BM_LassoMax);
BENCHMARK(BM_ProxL1)->Range(16, 4096);

BENCHMARK_MAIN();
