// Acceptance suite: eight go/no-go checks over the whole pipeline, one
// PASS/FAIL line each. Exit code 0 only when every check passes.
//
// The classify-subcommand check needs the built CLI; pass it as
// `--cli <path>` or via FLOWKNN_BIN (ctest wires this up automatically).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "flowknn/bench.hpp"
#include "flowknn/csv.hpp"
#include "flowknn/dataset.hpp"
#include "flowknn/eval.hpp"
#include "flowknn/features.hpp"
#include "flowknn/knn.hpp"
#include "flowknn/rng.hpp"
#include "flowknn/selectors.hpp"
#include "flowknn/synth.hpp"
#include "oracles.hpp"
#include "subprocess.hpp"

using namespace flowknn;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& message) {
    if (!condition && ok) {
      ok = false;
      detail = message;
    }
  }
};

std::uint64_t median_u64(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

// ---------------------------------------------------------------------------
// 1. Every selector's distance multiset equals the brute-force k-smallest
//    oracle on 500 seeded inputs spanning n x k.

Check criterion_oracle_equivalence() {
  Check c;
  const std::size_t sizes[] = {1, 2, 10, 100, 1000, 2000};
  const std::uint32_t ks[] = {1, 3, 5, 15, 32};
  for (int i = 0; i < 500 && c.ok; ++i) {
    const std::size_t n = sizes[i % 6];
    const std::uint32_t k = ks[(i / 6) % 5];
    const auto in = oracle::random_input(Rng::mix(0xACC1, i), n);
    const auto expected = oracle::k_smallest(in.distances, k);
    for (const Strategy s : kAllStrategies) {
      const auto r = run_selector(s, {in.distances, in.labels, k}, {.timing = false});
      c.expect(oracle::multiset_of(r.neighbors) == expected,
               "multiset mismatch for " + std::string(to_string(s)) + " at n=" +
                   std::to_string(n) + " k=" + std::to_string(k));
    }
  }
  if (c.ok) c.detail = "500 inputs x 5 strategies, exact";
  return c;
}

// ---------------------------------------------------------------------------
// 2. enumeration comparisons = n(n-1), bubble comparisons =
//    sum_{i<min(k,n)} (n-1-i), on 100 random (n, k) pairs.

Check criterion_counter_exactness() {
  Check c;
  Rng pick(0xACC2);
  for (int i = 0; i < 100 && c.ok; ++i) {
    const std::size_t n = 1 + pick.next_below(2000);
    const std::uint32_t k = 1 + static_cast<std::uint32_t>(pick.next_below(64));
    const auto in = oracle::random_input(Rng::mix(0xACC3, i), n);

    const auto e = run_selector(Strategy::enumeration, {in.distances, in.labels, k},
                                {.timing = false});
    c.expect(e.stats.comparisons == n * (n - 1),
             "enumeration count off at n=" + std::to_string(n));

    const auto b = run_selector(Strategy::bubble, {in.distances, in.labels, k},
                                {.timing = false});
    std::uint64_t want = 0;
    for (std::uint64_t p = 0; p < std::min<std::uint64_t>(k, n); ++p)
      want += n - 1 - p;
    c.expect(b.stats.comparisons == want,
             "bubble count off at n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  if (c.ok) c.detail = "100 random (n, k) pairs, exact";
  return c;
}

// ---------------------------------------------------------------------------
// 3. Median kmin element_writes < 0.2 x median bubble element_writes over
//    100 uniform-random inputs at n=1000, k=5.

Check criterion_write_economy() {
  Check c;
  std::vector<std::uint64_t> kmin_writes, bubble_writes;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto in = oracle::random_input(Rng::mix(0xACC4, seed), 1000);
    const SelectorInput input{in.distances, in.labels, 5};
    kmin_writes.push_back(kmin_select(input, {.timing = false}).stats.element_writes);
    bubble_writes.push_back(bubble_select(input, {.timing = false}).stats.element_writes);
  }
  const auto kmed = median_u64(kmin_writes);
  const auto bmed = median_u64(bubble_writes);
  c.expect(static_cast<double>(kmed) < 0.2 * static_cast<double>(bmed),
           "median writes " + std::to_string(kmed) + " !< 0.2 * " + std::to_string(bmed));
  std::ostringstream d;
  d << "median writes kmin=" << kmed << " bubble=" << bmed;
  c.detail = d.str();
  return c;
}

// ---------------------------------------------------------------------------
// 4. At n=18000, k=5, median comparison counts rank
//    kmin <= bubble < merge < min(enumeration, oddeven).

Check criterion_ranking() {
  Check c;
  BenchSpec spec;
  spec.sizes = {18000};
  spec.ks = {5};
  spec.reps = 3;
  spec.seed = 42;
  const BenchReport report = bench_selectors(spec);

  std::uint64_t med[5] = {};
  for (const BenchCell& cell : report.cells)
    med[static_cast<int>(cell.strategy)] = cell.comparisons.median;
  const auto kmin = med[static_cast<int>(Strategy::kmin)];
  const auto bubble = med[static_cast<int>(Strategy::bubble)];
  const auto merge = med[static_cast<int>(Strategy::merge)];
  const auto oddeven = med[static_cast<int>(Strategy::oddeven)];
  const auto enumeration = med[static_cast<int>(Strategy::enumeration)];

  c.expect(kmin <= bubble, "kmin > bubble");
  c.expect(bubble < merge, "bubble >= merge");
  c.expect(merge < std::min(enumeration, oddeven), "merge >= full quadratic sorts");
  std::ostringstream d;
  d << "median comparisons " << kmin << " <= " << bubble << " < " << merge << " < "
    << std::min(enumeration, oddeven);
  if (!c.ok) d << " [" << c.detail << "]";
  c.detail = d.str();
  return c;
}

// ---------------------------------------------------------------------------
// 5. Calibrated synthetic corpus (5 classes incl. one flood, 10000 samples),
//    50% stratified split, tuned k: accuracy >= 0.95 and within 0.02 of the
//    brute-force oracle on the identical split.

Check criterion_accuracy() {
  Check c;
  const Dataset corpus = synth_generate({5, 2000, 0.45, 2026});
  const Split parts = split(corpus, {0.5, 2026});

  const std::vector<std::uint32_t> candidates = {1, 3, 5, 7, 9, 11};
  const TuneResult tuned = tune_k(parts.train, candidates, 10, 2026);

  const EvalResult result =
      evaluate(parts.train, parts.test, {tuned.best_k, Strategy::kmin});

  std::size_t oracle_correct = 0;
  for (const auto& q : parts.test.samples)
    if (oracle::knn_classify(parts.train, q.features, tuned.best_k) == q.label)
      ++oracle_correct;
  const double oracle_accuracy =
      static_cast<double>(oracle_correct) / static_cast<double>(parts.test.size());

  c.expect(result.accuracy >= 0.95, "accuracy below 0.95");
  c.expect(std::abs(result.accuracy - oracle_accuracy) <= 0.02,
           "accuracy diverges from the oracle by more than 0.02");
  std::ostringstream d;
  d << "best_k=" << tuned.best_k << " accuracy=" << result.accuracy
    << " oracle=" << oracle_accuracy;
  if (!c.ok) d << " [" << c.detail << "]";
  c.detail = d.str();
  return c;
}

// ---------------------------------------------------------------------------
// 6. tune_k over {1,3,5,7,9,11} at 10 folds: deterministic, best_k is the
//    argmax with ties to smaller k, and an oracle CV sweep agrees.

Check criterion_tuning() {
  Check c;
  const Dataset corpus = synth_generate({5, 2000, 0.45, 2026});
  const std::vector<std::uint32_t> candidates = {1, 3, 5, 7, 9, 11};

  const KfoldAssignment fold_a = kfold_assign(corpus, 10, 7);
  const KfoldAssignment fold_b = kfold_assign(corpus, 10, 7);
  c.expect(fold_a.fold_of == fold_b.fold_of, "fold assignment not deterministic");

  const TuneResult a = tune_k(corpus, candidates, 10, 7);
  const TuneResult b = tune_k(corpus, candidates, 10, 7);
  c.expect(a.best_k == b.best_k && a.scores == b.scores,
           "tune_k not deterministic");

  // argmax with ties to smaller k, recomputed from the reported scores
  std::uint32_t argmax = 0;
  double best = -1.0;
  for (const auto& [k, score] : a.scores)
    if (score > best) {
      best = score;
      argmax = k;
    }
  c.expect(a.best_k == argmax, "best_k is not the argmax of the reported scores");

  const auto oracle_scores = oracle::cv_sweep(corpus, fold_a, candidates);
  std::uint32_t oracle_argmax = 0;
  double oracle_best = -1.0;
  for (const auto& [k, score] : oracle_scores)
    if (score > oracle_best) {
      oracle_best = score;
      oracle_argmax = k;
    }
  c.expect(a.best_k == oracle_argmax, "oracle sweep disagrees on best_k");
  for (std::size_t i = 0; i < candidates.size() && c.ok; ++i)
    c.expect(std::abs(a.scores[i].second - oracle_scores[i].second) <= 1e-12,
             "score mismatch at k=" + std::to_string(candidates[i]));

  std::ostringstream d;
  d << "best_k=" << a.best_k << " (oracle agrees), scores exact";
  if (!c.ok) d << " [" << c.detail << "]";
  c.detail = d.str();
  return c;
}

// ---------------------------------------------------------------------------
// 7. Hand-computed feature fixtures at 1e-12 and the windowize partition
//    property on 10000 random packets.

Check criterion_features() {
  Check c;

  FlowWindow w;
  w.device_id = "cam1";
  w.window_start = 0;
  w.window_length = 20;
  w.packets = {
      {1.0, "cam1", "10.0.0.8", "192.168.1.2", Protocol::tcp, 100, Direction::inbound},
      {2.0, "cam1", "192.168.1.2", "10.0.0.8", Protocol::tcp, 100, Direction::outbound},
      {3.5, "cam1", "10.0.0.9", "192.168.1.2", Protocol::udp, 60, Direction::inbound},
      {19.0, "cam1", "10.0.0.7", "192.168.1.2", Protocol::icmp, 60, Direction::inbound},
  };
  const FeatureVector f = extract_features(w);
  c.expect(std::abs(f.icmp_pct - 0.25) <= 1e-12, "icmp_pct");
  c.expect(std::abs(f.tcp_pct - 0.5) <= 1e-12, "tcp_pct");
  c.expect(std::abs(f.udp_pct - 0.25) <= 1e-12, "udp_pct");
  c.expect(std::abs(f.ip_diversity - 0.75) <= 1e-12, "ip_diversity");
  c.expect(f.packet_count == 4, "packet_count");
  c.expect(std::abs(f.mean_packet_size - 80.0) <= 1e-12, "mean_packet_size");

  FlowWindow flood;
  flood.device_id = "victim";
  flood.window_length = 20;
  for (int i = 0; i < 1000; ++i)
    flood.packets.push_back({0.01 * i, "victim",
                             "10.0." + std::to_string(i / 250) + "." + std::to_string(i % 250),
                             "192.168.1.9", Protocol::udp, 64, Direction::inbound});
  const FeatureVector g = extract_features(flood);
  c.expect(std::abs(g.udp_pct - 1.0) <= 1e-12, "flood udp_pct");
  c.expect(std::abs(g.ip_diversity - 1.0) <= 1e-12, "flood ip_diversity");

  Rng rng(0xACC7);
  std::vector<PacketMeta> packets;
  const char* devices[] = {"a", "b", "c"};
  for (int i = 0; i < 10000; ++i)
    packets.push_back({rng.next_in(0.0, 2000.0), devices[rng.next_below(3)], "s", "d",
                       Protocol::tcp, 1, Direction::inbound});
  const auto windows = windowize(packets, 20.0);
  std::size_t total = 0;
  for (const FlowWindow& win : windows) {
    total += win.packets.size();
    for (const PacketMeta& p : win.packets) {
      c.expect(p.device_id == win.device_id, "window grouped a foreign packet");
      c.expect(p.timestamp >= win.window_start &&
                   p.timestamp < win.window_start + win.window_length,
               "packet outside its window interval");
    }
  }
  c.expect(total == packets.size(), "partition lost or duplicated packets");
  if (c.ok) c.detail = "fixtures exact at 1e-12; 10000-packet partition holds";
  return c;
}

// ---------------------------------------------------------------------------
// 8. On a tie-free split, all five selectors produce identical prediction
//    vectors through both the library call and the classify subcommand.

Check criterion_selector_invariance() {
  Check c;
  const Dataset corpus = synth_generate({4, 300, 0.06, 5});
  const Split parts = split(corpus, {0.5, 5});

  testutil::TempDir dir;
  const auto model_path = dir.file("model.csv");
  const auto query_path = dir.file("queries.csv");
  {
    std::ofstream model(model_path);
    write_feature_csv(model, to_feature_rows(parts.train));
    std::vector<FeatureRow> queries = to_feature_rows(parts.test);
    for (FeatureRow& q : queries) q.label.reset();
    std::ofstream qf(query_path);
    write_feature_csv(qf, queries);
  }

  // Library predictions on the same parsed bytes the CLI will read.
  std::ifstream model_in(model_path);
  const Dataset train = dataset_from_rows(read_feature_csv(model_in));
  std::ifstream query_in(query_path);
  const auto queries = read_feature_csv(query_in);

  for (const FeatureRow& q : queries) {
    std::vector<double> distances;
    distances.reserve(train.samples.size());
    for (const auto& s : train.samples)
      distances.push_back(oracle::manhattan6(q.features, s.features));
    c.expect(oracle::tie_free(distances, 5), "split is not tie-free at k=5");
  }

  std::vector<std::vector<std::string>> library(kAllStrategies.size());
  for (std::size_t si = 0; si < kAllStrategies.size(); ++si)
    for (const FeatureRow& q : queries)
      library[si].push_back(
          train.label_name(classify(train, q.features, {5, kAllStrategies[si]}).label));
  for (std::size_t si = 1; si < library.size(); ++si)
    c.expect(library[si] == library[0],
             "library predictions differ between kmin and " +
                 std::string(to_string(kAllStrategies[si])));

  for (const Strategy s : kAllStrategies) {
    const auto r = testutil::run_cli({"classify", "--model", model_path.string(),
                                      "--in", query_path.string(), "--k", "5",
                                      "--selector", std::string(to_string(s))});
    c.expect(r.exit_code == 0, "classify subcommand failed");
    std::vector<std::string> predictions;
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line)) {
      // device_id,window_start,predicted_label,decision_nanos
      const std::size_t a = line.find(',');
      const std::size_t b = line.find(',', a + 1);
      const std::size_t d = line.rfind(',');
      predictions.push_back(line.substr(b + 1, d - b - 1));
    }
    c.expect(predictions == library[0],
             "CLI predictions differ for " + std::string(to_string(s)));
  }
  if (c.ok)
    c.detail = std::to_string(queries.size()) +
               " tie-free queries, 5 strategies, library and CLI identical";
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") testutil::cli_path_override() = argv[i + 1];

  struct Named {
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Named> criteria = {
      {"oracle-equivalence", criterion_oracle_equivalence},
      {"counter-exactness", criterion_counter_exactness},
      {"write-economy", criterion_write_economy},
      {"comparison-ranking", criterion_ranking},
      {"synthetic-accuracy", criterion_accuracy},
      {"k-tuning", criterion_tuning},
      {"feature-goldens", criterion_features},
      {"selector-invariance", criterion_selector_invariance},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check result;
    try {
      result = criteria[i].run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    if (!result.ok) ++failures;
    std::printf("[%zu/%zu] %-20s %s  (%s)\n", i + 1, criteria.size(),
                criteria[i].name, result.ok ? "PASS" : "FAIL",
                result.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s: %zu/%zu criteria passed\n", failures == 0 ? "OK" : "FAILED",
              criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
