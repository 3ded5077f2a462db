// Wall-clock microbenchmarks for the five selection strategies. The exact
// operation counters live in the library and in `flowknn bench`; this binary
// is for profiling the software implementations themselves.

#include <benchmark/benchmark.h>

#include <vector>

#include "flowknn/rng.hpp"
#include "flowknn/selectors.hpp"

namespace {

using namespace flowknn;

struct Input {
  std::vector<double> distances;
  std::vector<std::uint32_t> labels;
};

Input make_input(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Input in;
  in.distances.reserve(n);
  in.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    in.distances.push_back(rng.next_unit());
    in.labels.push_back(static_cast<std::uint32_t>(rng.next_below(8)));
  }
  return in;
}

void run_strategy(benchmark::State& state, Strategy strategy) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::uint32_t>(state.range(1));
  const Input in = make_input(n, 7);
  SelectionStats last{};
  for (auto _ : state) {
    auto r = run_selector(strategy, {in.distances, in.labels, k}, {.timing = false});
    benchmark::DoNotOptimize(r.neighbors.entries.data());
    last = r.stats;
  }
  state.counters["comparisons"] = static_cast<double>(last.comparisons);
  state.counters["writes"] = static_cast<double>(last.element_writes);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_KMin(benchmark::State& s) { run_strategy(s, Strategy::kmin); }
void BM_Bubble(benchmark::State& s) { run_strategy(s, Strategy::bubble); }
void BM_Merge(benchmark::State& s) { run_strategy(s, Strategy::merge); }
void BM_OddEven(benchmark::State& s) { run_strategy(s, Strategy::oddeven); }
void BM_Enumeration(benchmark::State& s) { run_strategy(s, Strategy::enumeration); }

}  // namespace

BENCHMARK(BM_KMin)->ArgsProduct({{1024, 8192, 65536}, {5, 32}});
BENCHMARK(BM_Bubble)->ArgsProduct({{1024, 8192, 65536}, {5, 32}});
BENCHMARK(BM_Merge)->ArgsProduct({{1024, 8192, 65536}, {5, 32}});
BENCHMARK(BM_OddEven)->ArgsProduct({{1024, 4096}, {5}});
BENCHMARK(BM_Enumeration)->ArgsProduct({{1024, 4096}, {5}});

BENCHMARK_MAIN();
