#include "flowknn/selectors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

namespace flowknn {
namespace {

using Clock = std::chrono::steady_clock;

void validate(const SelectorInput& input) {
  if (input.k < 1) throw std::invalid_argument("selector: k must be >= 1");
  if (input.distances.size() != input.labels.size())
    throw std::invalid_argument("selector: distance/label column size mismatch");
  if (input.distances.empty())
    throw std::invalid_argument("selector: input must contain at least one pair");
  for (const double d : input.distances)
    if (!(std::isfinite(d) && d >= 0.0))
      throw std::invalid_argument("selector: distances must be finite and non-negative");
}

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : std::min(hw, 8u);
}

NeighborSet take_first(const std::vector<double>& dist,
                       const std::vector<std::uint32_t>& label,
                       std::uint32_t k, std::size_t count) {
  NeighborSet out;
  out.k = k;
  out.entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.entries.push_back({dist[i], label[i]});
  return out;
}

struct Timer {
  explicit Timer(bool enabled) : enabled_(enabled) {
    if (enabled_) start_ = Clock::now();
  }
  std::uint64_t elapsed_nanos() const {
    if (!enabled_) return 0;
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start_)
            .count());
  }
  bool enabled_;
  Clock::time_point start_;
};

// One adjacent compare-and-swap on parallel (distance, label) arrays.
// 1 comparison + 2 reads always; 2 more reads + 4 writes when it swaps.
inline void exchange_pair(double* d, std::uint32_t* l, std::size_t j,
                          SelectionStats& st) {
  ++st.comparisons;
  st.element_reads += 2;
  if (d[j] > d[j + 1]) {
    st.element_reads += 2;
    std::swap(d[j], d[j + 1]);
    std::swap(l[j], l[j + 1]);
    st.element_writes += 4;
  }
}

void accumulate(SelectionStats& into, const SelectionStats& part) {
  into.comparisons += part.comparisons;
  into.element_reads += part.element_reads;
  into.element_writes += part.element_writes;
}

// ---------------------------------------------------------------------------
// kmin

SelectionResult kmin_run(const SelectorInput& input, const SelectOptions& options) {
  const std::size_t n = input.distances.size();
  const std::uint32_t k = input.k;
  constexpr double kSentinel = std::numeric_limits<double>::infinity();

  SelectionStats st;
  const Timer timer(options.timing);

  std::vector<double> slot_dist(k, kSentinel);
  std::vector<std::uint32_t> slot_label(k, 0);
  std::uint32_t max_slot = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const double d = input.distances[i];
    ++st.comparisons;
    ++st.element_reads;  // slot_dist[max_slot]
    if (d < slot_dist[max_slot]) {
      slot_dist[max_slot] = d;
      slot_label[max_slot] = input.labels[i];
      st.element_writes += 2;
      // rescan for the new maximum slot: k reads, k-1 comparisons
      max_slot = 0;
      double max_val = slot_dist[0];
      ++st.element_reads;
      for (std::uint32_t j = 1; j < k; ++j) {
        ++st.comparisons;
        ++st.element_reads;
        if (slot_dist[j] > max_val) {
          max_val = slot_dist[j];
          max_slot = j;
        }
      }
    }
  }

  NeighborSet out;
  out.k = k;
  out.entries.reserve(std::min<std::size_t>(k, n));
  for (std::uint32_t s = 0; s < k; ++s)
    if (slot_dist[s] != kSentinel) out.entries.push_back({slot_dist[s], slot_label[s]});

  st.wall_nanos = timer.elapsed_nanos();
  return {std::move(out), st};
}

// ---------------------------------------------------------------------------
// bubble

SelectionResult bubble_run(const SelectorInput& input, const SelectOptions& options) {
  const std::size_t n = input.distances.size();
  const std::size_t passes = std::min<std::size_t>(input.k, n);

  SelectionStats st;
  const Timer timer(options.timing);

  std::vector<double> d(input.distances.begin(), input.distances.end());
  std::vector<std::uint32_t> l(input.labels.begin(), input.labels.end());

  if (!options.parallel || n < 2) {
    for (std::size_t i = 0; i < passes; ++i)
      for (std::size_t j = n - 1; j > i; --j) exchange_pair(d.data(), l.data(), j - 1, st);
  } else {
    // Wave schedule: pass p performs its c-th comparison (at j = n-1-c) at
    // step t = 2p + c, so concurrently active passes sit two slots apart and
    // never touch the same pair. Swap decisions and counters match the
    // sequential schedule exactly.
    std::vector<SelectionStats> per_pass(passes);
    const unsigned threads = resolve_threads(options.threads);
    const std::size_t t_end = passes + n - 2;  // last active step is passes+n-3
    for (std::size_t t = 0; t < t_end; ++t) {
      const std::size_t p_lo = (t + 2 > n) ? (t - (n - 2)) : 0;
      const std::size_t p_hi = std::min(passes - 1, t / 2);
      if (p_lo > p_hi) continue;
      const std::size_t active = p_hi - p_lo + 1;
      const auto run_span = [&](std::size_t a, std::size_t b) {
        for (std::size_t p = a; p < b; ++p) {
          const std::size_t j = (n - 1) - (t - 2 * p);
          exchange_pair(d.data(), l.data(), j - 1, per_pass[p]);
        }
      };
      if (active == 1 || threads == 1) {
        run_span(p_lo, p_hi + 1);
      } else {
        const std::size_t chunks = std::min<std::size_t>(threads, active);
        std::vector<std::future<void>> futs;
        futs.reserve(chunks);
        for (std::size_t c = 0; c < chunks; ++c) {
          const std::size_t a = p_lo + active * c / chunks;
          const std::size_t b = p_lo + active * (c + 1) / chunks;
          futs.push_back(std::async(std::launch::async, run_span, a, b));
        }
        for (auto& f : futs) f.get();
      }
    }
    for (const auto& part : per_pass) accumulate(st, part);
  }

  NeighborSet out = take_first(d, l, input.k, passes);
  st.wall_nanos = timer.elapsed_nanos();
  return {std::move(out), st};
}

// ---------------------------------------------------------------------------
// merge

struct MergeCtx {
  std::vector<double>& ad;
  std::vector<std::uint32_t>& al;
  std::vector<double>& bd;
  std::vector<std::uint32_t>& bl;
  SelectionStats& st;
};

void merge_runs(const std::vector<double>& sd, const std::vector<std::uint32_t>& sl,
                std::vector<double>& dd, std::vector<std::uint32_t>& dl,
                std::size_t lo, std::size_t mid, std::size_t hi,
                SelectionStats& st) {
  std::size_t i = lo;
  std::size_t j = mid;
  for (std::size_t o = lo; o < hi; ++o) {
    bool take_right;
    if (i >= mid) {
      take_right = true;
    } else if (j >= hi) {
      take_right = false;
    } else {
      ++st.comparisons;
      st.element_reads += 2;
      take_right = sd[j] < sd[i];  // left run wins ties: stable
    }
    const std::size_t s = take_right ? j++ : i++;
    st.element_reads += 2;
    dd[o] = sd[s];
    dl[o] = sl[s];
    st.element_writes += 2;
  }
}

void msort_out(MergeCtx& c, std::size_t lo, std::size_t hi);

// sorts a[lo,hi) in place, b is scratch
void msort_in(MergeCtx& c, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 1) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  msort_out(c, lo, mid);
  msort_out(c, mid, hi);
  merge_runs(c.bd, c.bl, c.ad, c.al, lo, mid, hi, c.st);
}

// sorts a[lo,hi) into b[lo,hi)
void msort_out(MergeCtx& c, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) {
    c.st.element_reads += 2;
    c.bd[lo] = c.ad[lo];
    c.bl[lo] = c.al[lo];
    c.st.element_writes += 2;
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  msort_in(c, lo, mid);
  msort_in(c, mid, hi);
  merge_runs(c.ad, c.al, c.bd, c.bl, lo, mid, hi, c.st);
}

SelectionResult merge_run(const SelectorInput& input, const SelectOptions& options) {
  const std::size_t n = input.distances.size();

  SelectionStats st;
  const Timer timer(options.timing);

  std::vector<double> ad(input.distances.begin(), input.distances.end());
  std::vector<std::uint32_t> al(input.labels.begin(), input.labels.end());
  std::vector<double> bd(n);
  std::vector<std::uint32_t> bl(n);

  MergeCtx ctx{ad, al, bd, bl, st};
  msort_in(ctx, 0, n);

  NeighborSet out = take_first(ad, al, input.k, std::min<std::size_t>(input.k, n));
  st.wall_nanos = timer.elapsed_nanos();
  return {std::move(out), st};
}

// ---------------------------------------------------------------------------
// oddeven

SelectionResult oddeven_run(const SelectorInput& input, const SelectOptions& options) {
  const std::size_t n = input.distances.size();

  SelectionStats st;
  const Timer timer(options.timing);

  std::vector<double> d(input.distances.begin(), input.distances.end());
  std::vector<std::uint32_t> l(input.labels.begin(), input.labels.end());

  const unsigned threads = resolve_threads(options.threads);
  for (std::size_t phase = 0; phase < n; ++phase) {
    const std::size_t start = phase % 2;
    const std::size_t pairs = (n - start) / 2;
    if (pairs == 0) continue;
    const auto run_span = [&](std::size_t a, std::size_t b, SelectionStats& part) {
      for (std::size_t p = a; p < b; ++p)
        exchange_pair(d.data(), l.data(), start + 2 * p, part);
    };
    if (!options.parallel || threads == 1 || pairs < 2) {
      run_span(0, pairs, st);
    } else {
      // Pairs within a phase are disjoint; chunk them across threads and sum
      // the per-chunk counters in chunk order.
      const std::size_t chunks = std::min<std::size_t>(threads, pairs);
      std::vector<SelectionStats> parts(chunks);
      std::vector<std::future<void>> futs;
      futs.reserve(chunks);
      for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t a = pairs * c / chunks;
        const std::size_t b = pairs * (c + 1) / chunks;
        futs.push_back(std::async(std::launch::async, run_span, a, b, std::ref(parts[c])));
      }
      for (auto& f : futs) f.get();
      for (const auto& part : parts) accumulate(st, part);
    }
  }

  NeighborSet out = take_first(d, l, input.k, std::min<std::size_t>(input.k, n));
  st.wall_nanos = timer.elapsed_nanos();
  return {std::move(out), st};
}

// ---------------------------------------------------------------------------
// enumeration

SelectionResult enumeration_run(const SelectorInput& input, const SelectOptions& options) {
  const std::size_t n = input.distances.size();

  SelectionStats st;
  const Timer timer(options.timing);

  std::vector<double> sd(input.distances.begin(), input.distances.end());
  std::vector<std::uint32_t> sl(input.labels.begin(), input.labels.end());
  std::vector<double> od(n);
  std::vector<std::uint32_t> ol(n);

  for (std::size_t i = 0; i < n; ++i) {
    ++st.element_reads;
    const double di = sd[i];
    std::size_t rank = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      ++st.comparisons;
      ++st.element_reads;
      const double dj = sd[j];
      if (dj < di || (dj == di && j < i)) ++rank;
    }
    ++st.element_reads;  // sl[i]
    od[rank] = di;
    ol[rank] = sl[i];
    st.element_writes += 2;
  }

  NeighborSet out = take_first(od, ol, input.k, std::min<std::size_t>(input.k, n));
  st.wall_nanos = timer.elapsed_nanos();
  return {std::move(out), st};
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kmin: return "kmin";
    case Strategy::bubble: return "bubble";
    case Strategy::merge: return "merge";
    case Strategy::oddeven: return "oddeven";
    case Strategy::enumeration: return "enumeration";
  }
  return "unknown";
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
  for (const Strategy s : kAllStrategies)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

SelectionResult kmin_select(const SelectorInput& input, const SelectOptions& options) {
  validate(input);
  return kmin_run(input, options);
}

SelectionResult bubble_select(const SelectorInput& input, const SelectOptions& options) {
  validate(input);
  return bubble_run(input, options);
}

SelectionResult merge_select(const SelectorInput& input, const SelectOptions& options) {
  validate(input);
  return merge_run(input, options);
}

SelectionResult oddeven_select(const SelectorInput& input, const SelectOptions& options) {
  validate(input);
  return oddeven_run(input, options);
}

SelectionResult enumeration_select(const SelectorInput& input,
                                   const SelectOptions& options) {
  validate(input);
  return enumeration_run(input, options);
}

SelectionResult run_selector(Strategy strategy, const SelectorInput& input,
                             const SelectOptions& options) {
  switch (strategy) {
    case Strategy::kmin: return kmin_select(input, options);
    case Strategy::bubble: return bubble_select(input, options);
    case Strategy::merge: return merge_select(input, options);
    case Strategy::oddeven: return oddeven_select(input, options);
    case Strategy::enumeration: return enumeration_select(input, options);
  }
  throw std::invalid_argument("selector: unknown strategy");
}

std::uint64_t enumeration_comparison_count(std::uint64_t n) { return n * (n - 1); }

std::uint64_t oddeven_comparison_count(std::uint64_t n) {
  // n phases: ceil(n/2) even phases of floor(n/2) pairs plus floor(n/2) odd
  // phases of floor((n-1)/2) pairs, which collapses to n(n-1)/2.
  return n * (n - 1) / 2;
}

std::uint64_t bubble_comparison_count(std::uint64_t n, std::uint64_t k) {
  const std::uint64_t passes = std::min(n, k);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < passes; ++i) total += n - 1 - i;
  return total;
}

}  // namespace flowknn
