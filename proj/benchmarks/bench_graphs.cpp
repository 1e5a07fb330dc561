#include <benchmark/benchmark.h>

#include "gnnv/gnn.hpp"
#include "gnnv/model_check.hpp"
#include "gnnv/verify.hpp"
#include "gnnv/wl.hpp"

using namespace gnnv;

static void BM_ColorRefinement(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = random_graph(n, Rational(4, static_cast<long>(n)), 2, true, 1);
  for (auto _ : state) benchmark::DoNotOptimize(wl::color_refinement(g).stable().class_count());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ColorRefinement)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

static void BM_Owl2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = symmetrize(random_graph(n, Rational(1, 4), 1, true, 2));
  for (auto _ : state) benchmark::DoNotOptimize(wl::owl2(g).histogram().size());
}
BENCHMARK(BM_Owl2)->RangeMultiplier(2)->Range(4, 32);

static void BM_Forward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = random_graph(n, Rational(4, static_cast<long>(n)), 3, true, 3);
  const auto model = random_gnn(3, {4, 4, 2}, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(forward(model, g).accept.size());
}
BENCHMARK(BM_Forward)->RangeMultiplier(4)->Range(16, 1024);

static void BM_GnnToKSharp(benchmark::State& state) {
  const auto model = random_gnn(2, {2, 2}, static_cast<std::uint64_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(gnn_to_ksharp(model));
}
BENCHMARK(BM_GnnToKSharp)->Arg(1)->Arg(2)->Arg(4);

static void BM_ModelCheck(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = random_graph(n, Rational(4, static_cast<long>(n)), 2, true, 5);
  const auto phi = gnn_to_ksharp(random_gnn(2, {2, 2}, 1, 5));
  for (auto _ : state) {
    ModelChecker mc(g);
    benchmark::DoNotOptimize(mc.truth(phi).size());
  }
}
BENCHMARK(BM_ModelCheck)->RangeMultiplier(4)->Range(16, 1024);

BENCHMARK_MAIN();
