#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "flowknn/selectors.hpp"

namespace flowknn {

// Published CPU/FPGA latencies (milliseconds) for this family of selection
// strategies at comparable scale. Not reproducible here; carried in report
// metadata so rank comparisons have a fixed external baseline.
struct ReferenceLatency {
  Strategy strategy;
  double cpu_ms;
  double fpga_ms;
};

inline constexpr std::array<ReferenceLatency, 5> kReferenceLatencyMs = {{
    {Strategy::kmin, 32519.0, 3.913},
    {Strategy::bubble, 34811.0, 13.041},
    {Strategy::merge, 150000.0, 6024.0},
    {Strategy::enumeration, 1209000.0, 281750.0},
    {Strategy::oddeven, 1927200.0, 297615.0},
}};

struct BenchSpec {
  std::vector<std::uint32_t> sizes;  // input lengths n, non-empty
  std::vector<std::uint32_t> ks;     // neighbor counts, non-empty
  std::uint32_t reps = 3;
  std::uint64_t seed = 0;
  std::vector<Strategy> strategies;  // empty = all five
};

// min / lower median / max of the kept repetitions.
struct StatSummary {
  std::uint64_t min = 0;
  std::uint64_t median = 0;
  std::uint64_t max = 0;
};

struct BenchCell {
  Strategy strategy;
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  StatSummary comparisons;
  StatSummary element_reads;
  StatSummary element_writes;
  StatSummary wall_nanos;
};

struct BenchReport {
  std::uint64_t seed = 0;
  std::uint32_t reps = 0;
  std::string host;
  std::vector<BenchCell> cells;
};

// Runs every (strategy, n, k) combination reps times on seeded
// uniform-random inputs. The input for repetition r of cell (n, k) is
// derived from (seed, n, k, r) only, so all strategies see identical data.
// When reps >= 3 the first repetition is a discarded warm-up. Cells run
// sequentially; no timing run shares the process with another.
BenchReport bench_selectors(const BenchSpec& spec);

std::string bench_report_to_json(const BenchReport& report);

std::string host_description();

}  // namespace flowknn
