#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace flowknn {

// Five interchangeable strategies that reduce a list of n (distance, label)
// pairs to the min(k, n) smallest distances, each with exact operation
// counters so their work can be compared analytically rather than only by
// wall clock.
//
// Counting rules (shared by all strategies):
//   - comparisons     one per order test between two distance values; the
//                     stable three-way test used by enumeration counts once
//   - element_reads   one per distance or label value loaded from a working
//                     array; values cached in locals are not recounted
//   - element_writes  one per distance or label value stored to a working
//                     array; swapping a (distance, label) pair with another
//                     costs 4 writes (2 per array)
//   - populating the working arrays from the input, sentinel initialization,
//     and marshaling the result are not counted
//
// Closed forms (validated by trace in the tests):
//   enumeration  comparisons = n(n-1)
//   oddeven      comparisons = n(n-1)/2   (n phases; ceil(n/2) even phases of
//                floor(n/2) pairs plus floor(n/2) odd phases of
//                floor((n-1)/2) pairs)
//   bubble       comparisons = sum_{i=0}^{min(k,n)-1} (n-1-i)
//   kmin         comparisons = n + (k-1) * replacements
//   merge        comparisons <= n * ceil(log2 n)

struct SelectionStats {
  std::uint64_t comparisons = 0;
  std::uint64_t element_reads = 0;
  std::uint64_t element_writes = 0;
  std::uint64_t wall_nanos = 0;  // 0 when timing is disabled
};

struct Neighbor {
  double distance = 0.0;
  std::uint32_t label = 0;
};

// Up to k (distance, label) pairs. Fully-sorting strategies emit entries in
// ascending distance order; kmin emits them in slot order. Never contains a
// sentinel: |entries| = min(k, n).
struct NeighborSet {
  std::vector<Neighbor> entries;
  std::uint32_t k = 0;
};

// n parallel (distance, label) columns plus the neighbor count. Distances
// must be finite and non-negative; n >= 1, k >= 1.
struct SelectorInput {
  std::span<const double> distances;
  std::span<const std::uint32_t> labels;
  std::uint32_t k = 0;
};

enum class Strategy : std::uint8_t { kmin, bubble, merge, oddeven, enumeration };

inline constexpr std::array<Strategy, 5> kAllStrategies = {
    Strategy::kmin, Strategy::bubble, Strategy::merge, Strategy::oddeven,
    Strategy::enumeration};

// Wire identifiers, used verbatim by CLI flags, config, and report JSON.
std::string_view to_string(Strategy strategy);
std::optional<Strategy> strategy_from_string(std::string_view name);

struct SelectOptions {
  bool timing = true;
  // Data-parallel execution for the pair-exchange strategies: concurrent
  // pairs within an odd-even phase, wave-scheduled concurrent bubbles.
  // Output and counters are identical to sequential mode; other strategies
  // ignore the flag.
  bool parallel = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct SelectionResult {
  NeighborSet neighbors;
  SelectionStats stats;
};

// Single pass; k slots initialized to the infinity sentinel, the current
// maximum slot replaced whenever a strictly smaller distance arrives, the
// maximum index rescanned (k-1 comparisons, k reads) only after a
// replacement. element_writes = 2 * replacements.
SelectionResult kmin_select(const SelectorInput& input,
                            const SelectOptions& options = {});

// min(k, n) backward passes over the full pair array; pass i bubbles the
// i-th smallest element into slot i via adjacent compare/swap (strict
// inequality only, hence stable).
SelectionResult bubble_select(const SelectorInput& input,
                              const SelectOptions& options = {});

// Full top-down stable merge sort (ping-pong between the working and scratch
// arrays), then the first min(k, n) slots.
SelectionResult merge_select(const SelectorInput& input,
                             const SelectOptions& options = {});

// Exactly n alternating phases; even phases exchange pairs (0,1),(2,3),...,
// odd phases (1,2),(3,4),.... Swap on strict inequality only.
SelectionResult oddeven_select(const SelectorInput& input,
                               const SelectOptions& options = {});

// Stable rank sort: rank(i) = |{j : d_j < d_i}| + |{j < i : d_j = d_i}|,
// each element written to its final position exactly once.
SelectionResult enumeration_select(const SelectorInput& input,
                                   const SelectOptions& options = {});

SelectionResult run_selector(Strategy strategy, const SelectorInput& input,
                             const SelectOptions& options = {});

std::uint64_t enumeration_comparison_count(std::uint64_t n);
std::uint64_t oddeven_comparison_count(std::uint64_t n);
std::uint64_t bubble_comparison_count(std::uint64_t n, std::uint64_t k);

}  // namespace flowknn
