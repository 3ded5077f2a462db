#include "flowknn/bench.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>
#include <sys/utsname.h>

#include "flowknn/rng.hpp"

namespace flowknn {
namespace {

constexpr std::uint64_t kBenchSalt = 0x42454e43;  // "BENC"

StatSummary summarize(std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  StatSummary s;
  s.min = values.front();
  s.median = values[(values.size() - 1) / 2];  // lower median for even counts
  s.max = values.back();
  return s;
}

nlohmann::ordered_json to_json(const StatSummary& s) {
  return {{"min", s.min}, {"median", s.median}, {"max", s.max}};
}

}  // namespace

BenchReport bench_selectors(const BenchSpec& spec) {
  if (spec.reps < 1) throw std::invalid_argument("bench: reps must be >= 1");
  if (spec.sizes.empty() || spec.ks.empty())
    throw std::invalid_argument("bench: sizes and ks must be non-empty");
  for (const std::uint32_t n : spec.sizes)
    if (n < 1) throw std::invalid_argument("bench: sizes must be >= 1");
  for (const std::uint32_t k : spec.ks)
    if (k < 1) throw std::invalid_argument("bench: ks must be >= 1");

  const std::vector<Strategy> strategies =
      spec.strategies.empty()
          ? std::vector<Strategy>(kAllStrategies.begin(), kAllStrategies.end())
          : spec.strategies;

  BenchReport report;
  report.seed = spec.seed;
  report.reps = spec.reps;
  report.host = host_description();

  std::vector<double> distances;
  std::vector<std::uint32_t> labels;
  for (const Strategy strategy : strategies) {
    for (const std::uint32_t n : spec.sizes) {
      for (const std::uint32_t k : spec.ks) {
        std::vector<std::uint64_t> comparisons, reads, writes, wall;
        for (std::uint32_t rep = 0; rep < spec.reps; ++rep) {
          // Strategy-independent derivation: every strategy gets the same
          // input for a given (seed, n, k, rep).
          Rng rng(Rng::mix(Rng::mix(Rng::mix(Rng::mix(spec.seed, kBenchSalt), n), k), rep));
          distances.resize(n);
          labels.resize(n);
          for (std::uint32_t i = 0; i < n; ++i) {
            distances[i] = rng.next_unit();
            labels[i] = static_cast<std::uint32_t>(rng.next_below(4));
          }
          const SelectionResult r = run_selector(strategy, {distances, labels, k});
          if (rep == 0 && spec.reps >= 3) continue;  // warm-up
          comparisons.push_back(r.stats.comparisons);
          reads.push_back(r.stats.element_reads);
          writes.push_back(r.stats.element_writes);
          wall.push_back(r.stats.wall_nanos);
        }
        BenchCell cell;
        cell.strategy = strategy;
        cell.n = n;
        cell.k = k;
        cell.comparisons = summarize(std::move(comparisons));
        cell.element_reads = summarize(std::move(reads));
        cell.element_writes = summarize(std::move(writes));
        cell.wall_nanos = summarize(std::move(wall));
        report.cells.push_back(cell);
      }
    }
  }
  return report;
}

std::string bench_report_to_json(const BenchReport& report) {
  nlohmann::ordered_json doc;
  doc["meta"]["seed"] = report.seed;
  doc["meta"]["reps"] = report.reps;
  doc["meta"]["host"] = report.host;
  nlohmann::ordered_json cpu, fpga;
  for (const ReferenceLatency& ref : kReferenceLatencyMs) {
    cpu[std::string(to_string(ref.strategy))] = ref.cpu_ms;
    fpga[std::string(to_string(ref.strategy))] = ref.fpga_ms;
  }
  doc["meta"]["reference_latency_ms"] = {{"cpu", cpu}, {"fpga", fpga}};
  doc["cells"] = nlohmann::ordered_json::array();
  for (const BenchCell& cell : report.cells) {
    nlohmann::ordered_json c;
    c["strategy"] = to_string(cell.strategy);
    c["n"] = cell.n;
    c["k"] = cell.k;
    c["comparisons"] = to_json(cell.comparisons);
    c["element_reads"] = to_json(cell.element_reads);
    c["element_writes"] = to_json(cell.element_writes);
    c["wall_nanos"] = to_json(cell.wall_nanos);
    doc["cells"].push_back(c);
  }
  return doc.dump();
}

std::string host_description() {
  utsname info{};
  if (uname(&info) != 0) return "unknown";
  return std::string(info.sysname) + " " + info.release + " " + info.machine;
}

}  // namespace flowknn
