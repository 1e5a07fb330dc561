#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "gnnv/formula_io.hpp"
#include "gnnv/qbf.hpp"
#include "gnnv/qfbapa.hpp"
#include "gnnv/sat.hpp"

using namespace gnnv;

static void BM_SatK_Tqbf(benchmark::State& state) {
  const auto q = sat::random_qbf(static_cast<std::size_t>(state.range(0)), 3, 42);
  const Formula f = sat::tqbf_to_k(q);
  for (auto _ : state) benchmark::DoNotOptimize(sat::sat_k(f).verdict);
}
BENCHMARK(BM_SatK_Tqbf)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_SatKSharp_Graded(benchmark::State& state) {
  const std::string k = std::to_string(state.range(0));
  const Formula f = parse_formula("#(p) >= " + k + " & #(q) >= " + k + " & #(p & q) <= 1 & [](<>p | ~q)");
  for (auto _ : state) benchmark::DoNotOptimize(sat::sat_ksharp(f).verdict);
}
BENCHMARK(BM_SatKSharp_Graded)->RangeMultiplier(10)->Range(1, 100000)->Unit(benchmark::kMillisecond);

static void BM_SatKSharp_RegionIdentity(benchmark::State& state) {
  const Formula f = parse_formula("#(p) + #(~p) - #(q) - #(~q) >= 1");
  for (auto _ : state) benchmark::DoNotOptimize(sat::sat_ksharp(f).verdict);
}
BENCHMARK(BM_SatKSharp_RegionIdentity)->Unit(benchmark::kMillisecond);

static arith::QfbapaFormula chain(std::size_t e) {
  // |S1| = 1, |S_i| = |S_{i-1}| + 1 and all sets pairwise nested.
  std::string text = "|S1| = 1";
  for (std::size_t i = 2; i <= e; ++i) {
    const std::string a = "S" + std::to_string(i - 1), b = "S" + std::to_string(i);
    text += " and " + a + " sub " + b + " and |" + b + "| = |" + a + "| + 1";
  }
  return arith::parse_qfbapa(text);
}

static void BM_Qfbapa_Regions(benchmark::State& state) {
  const auto f = chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(arith::qfbapa_sat(f).verdict);
}
BENCHMARK(BM_Qfbapa_Regions)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_Qfbapa_Naive(benchmark::State& state) {
  const auto f = chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(arith::qfbapa_sat_naive(f).verdict);
}
BENCHMARK(BM_Qfbapa_Naive)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_Qfbapa_Random(benchmark::State& state) {
  std::mt19937_64 rng(7);
  arith::RandomQfbapaConfig cfg;
  cfg.set_vars = static_cast<std::size_t>(state.range(0));
  std::vector<arith::QfbapaFormula> corpus;
  for (int i = 0; i < 32; ++i) corpus.push_back(arith::random_qfbapa(cfg, rng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(arith::qfbapa_sat(corpus[i++ % corpus.size()]).verdict);
}
BENCHMARK(BM_Qfbapa_Random)->DenseRange(1, 5)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
