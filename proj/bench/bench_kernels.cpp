// Serial vs OpenMP timings for the scanning kernels.

#include <benchmark/benchmark.h>

#include <map>
#include <string>

#include "sst/analysis.hpp"
#include "sst/decompose.hpp"
#include "sst/oracle.hpp"
#include "sst/parse.hpp"

using namespace sst;

namespace {

const Sst& fixture(const char* name) {
  static std::map<std::string, Sst> cache;
  auto it = cache.find(name);
  if (it == cache.end())
    it = cache.emplace(name, load_sst(std::string(FIXTURE_DIR) + "/" + name)).first;
  return it->second;
}

Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::Serial : Exec::Parallel;
}

void BM_ValuednessOracle(benchmark::State& state) {
  const Sst& s = fixture("tsc.sst");
  for (auto _ : state)
    benchmark::DoNotOptimize(valuedness_oracle(s, static_cast<std::size_t>(state.range(1)),
                                               kDefaultBudget, exec_of(state)));
}

void BM_AmbiguityOracle(benchmark::State& state) {
  const Sst& s = fixture("r2.sst");
  for (auto _ : state)
    benchmark::DoNotOptimize(ambiguity_oracle(s, static_cast<std::size_t>(state.range(1)),
                                              kDefaultBudget, exec_of(state)));
}

void BM_Equivalence(benchmark::State& state) {
  const Sst& a = fixture("id.sst");
  const Sst& b = fixture("id_dead.sst");
  for (auto _ : state)
    benchmark::DoNotOptimize(check_equivalence_bounded(
        a, b, static_cast<std::size_t>(state.range(1)), kDefaultBudget, exec_of(state)));
}

void BM_WPatternSearch(benchmark::State& state) {
  const Sst& s = fixture("tsc1.sst");
  WSearchOptions o;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(find_divergent_wpattern(s, o));
}

}  // namespace

BENCHMARK(BM_ValuednessOracle)->ArgsProduct({{0, 1}, {5, 7}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AmbiguityOracle)->ArgsProduct({{0, 1}, {6, 8}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Equivalence)->ArgsProduct({{0, 1}, {6, 8}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WPatternSearch)->Args({0, 0})->Args({1, 0})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
