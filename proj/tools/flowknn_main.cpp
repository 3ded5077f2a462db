// flowknn: feature extraction, synthetic data, k tuning, evaluation,
// selector benchmarking, and single-query classification in one binary.
//
// Exit codes: 0 success, 1 runtime failure (I/O, malformed data), 2 usage.
// Primary machine-readable output goes to stdout unless --out is given;
// logs go to stderr (verbosity via FLOWKNN_LOG=error|warn|info|debug).

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "flowknn/bench.hpp"
#include "flowknn/csv.hpp"
#include "flowknn/dataset.hpp"
#include "flowknn/eval.hpp"
#include "flowknn/knn.hpp"
#include "flowknn/log.hpp"
#include "flowknn/selectors.hpp"
#include "flowknn/synth.hpp"

namespace {

using namespace flowknn;

const std::vector<std::string> kStrategyNames = {"kmin", "bubble", "merge",
                                                 "oddeven", "enumeration"};

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  const fs::path tmp =
      dir / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

void emit_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    std::cout.flush();
  } else {
    write_file_atomic(out_path, content);
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

Strategy parse_strategy(const std::string& name) {
  const auto s = strategy_from_string(name);
  if (!s) throw std::runtime_error("unknown selector '" + name + "'");
  return *s;
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
  std::string in, out;
  double window_length = 20.0;
  bool strict = false;
};

int run_extract(const ExtractArgs& args) {
  auto in = open_input(args.in);
  const IngestResult ingested =
      ingest_packets(in, args.strict ? IngestMode::strict : IngestMode::lenient);
  if (ingested.rows_skipped > 0) {
    log_warn("skipped " + std::to_string(ingested.rows_skipped) + " malformed rows");
    for (const std::string& e : ingested.row_errors) log_info(e);
  }
  log_info("ingested " + std::to_string(ingested.packets.size()) + " packets");

  const auto windows = windowize(ingested.packets, args.window_length);
  std::vector<FeatureRow> rows;
  rows.reserve(windows.size());
  for (const FlowWindow& w : windows)
    rows.push_back({w.device_id, w.window_start, extract_features(w), std::nullopt});
  emit_output(args.out, feature_csv_string(rows));
  return 0;
}

struct SynthArgs {
  std::string out, labels_out;
  SynthSpec spec;
};

int run_synth(const SynthArgs& args) {
  const Dataset data = synth_generate(args.spec);
  emit_output(args.out, feature_csv_string(to_feature_rows(data)));
  if (!args.labels_out.empty())
    write_file_atomic(args.labels_out, label_table_to_json(data.label_table) + "\n");
  return 0;
}

struct TuneArgs {
  std::string in, out;
  std::vector<std::uint32_t> ks = {1, 3, 5, 7, 9, 11};
  std::uint32_t folds = 10;
  std::uint64_t seed = 0;
};

int run_tune(const TuneArgs& args) {
  auto in = open_input(args.in);
  const Dataset data = dataset_from_rows(read_feature_csv(in));
  const TuneResult result = tune_k(data, args.ks, args.folds, args.seed);
  if (!result.stratified)
    log_warn("some class has fewer samples than folds; folds are not stratified");
  for (const std::uint32_t k : result.skipped)
    log_warn("candidate k=" + std::to_string(k) + " exceeds the training fold size, skipped");
  emit_output(args.out, tune_result_to_json(result) + "\n");
  return 0;
}

struct EvalArgs {
  std::string in, out;
  double split_fraction = 0.5;
  std::uint32_t k = 5;
  std::string selector = "kmin";
  std::uint64_t seed = 0;
};

int run_eval(const EvalArgs& args) {
  auto in = open_input(args.in);
  const Dataset data = dataset_from_rows(read_feature_csv(in));
  const Split parts = split(data, {args.split_fraction, args.seed});
  const KnnConfig config{args.k, parse_strategy(args.selector)};
  const EvalResult result = evaluate(parts.train, parts.test, config);
  emit_output(args.out, eval_result_to_json(result, data.label_table, config,
                                            args.seed, args.split_fraction) +
                            "\n");
  return 0;
}

struct BenchArgs {
  std::string out;
  BenchSpec spec;
  std::vector<std::string> strategies = kStrategyNames;
};

int run_bench(BenchArgs args) {
  for (const std::string& name : args.strategies)
    args.spec.strategies.push_back(parse_strategy(name));
  const BenchReport report = bench_selectors(args.spec);
  emit_output(args.out, bench_report_to_json(report) + "\n");
  return 0;
}

struct ClassifyArgs {
  std::string model, in, out;
  std::uint32_t k = 5;
  std::string selector = "kmin";
};

int run_classify(const ClassifyArgs& args) {
  auto model_in = open_input(args.model);
  const auto model_rows = read_feature_csv(model_in);
  if (model_rows.empty()) throw std::runtime_error("model file has no samples");
  if (!model_rows.front().label)
    throw std::runtime_error("model file must carry the label column");
  const Dataset train = dataset_from_rows(model_rows);

  auto query_in = open_input(args.in);
  const auto queries = read_feature_csv(query_in);
  if (!queries.empty() && queries.front().label)
    throw std::runtime_error("query file must not carry the label column");

  const KnnConfig config{args.k, parse_strategy(args.selector)};
  std::ostringstream out;
  for (const FeatureRow& q : queries) {
    const auto t0 = std::chrono::steady_clock::now();
    const Classification c = classify(train, q.features, config);
    const auto nanos = std::chrono::duration_cast<std::chrono::nanoseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    out << q.device_id << ',' << format_double(q.window_start) << ','
        << train.label_name(c.label) << ',' << nanos << '\n';
  }
  emit_output(args.out, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network-flow KNN classification and selector benchmarking"};
  app.require_subcommand(1);
  app.footer("Environment: FLOWKNN_LOG=error|warn|info|debug sets stderr verbosity.");

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand(
      "extract", "convert a packet CSV into per-window feature vectors");
  extract->add_option("--in", extract_args.in, "packet CSV input")
      ->required();
  extract->add_option("--out", extract_args.out, "feature CSV output (default stdout)");
  extract
      ->add_option("--window-length", extract_args.window_length,
                   "polling interval in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  extract->add_flag("--strict", extract_args.strict,
                    "abort on the first malformed row instead of skipping it");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a labeled synthetic corpus");
  synth->add_option("--out", synth_args.out, "feature CSV output (default stdout)");
  synth->add_option("--labels-out", synth_args.labels_out, "label table JSON output");
  synth->add_option("--classes", synth_args.spec.classes, "class count (last is the flood class)")
      ->capture_default_str()
      ->check(CLI::Range(2u, 1000000u));
  synth
      ->add_option("--samples-per-class", synth_args.spec.samples_per_class,
                   "samples per class")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--spread", synth_args.spec.cluster_spread, "cluster noise magnitude")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", synth_args.spec.seed, "generator seed")
      ->capture_default_str();

  TuneArgs tune_args;
  auto* tune = app.add_subcommand("tune-k", "cross-validated sweep over k candidates");
  tune->add_option("--in", tune_args.in, "labeled feature CSV input")
      ->required();
  tune->add_option("--out", tune_args.out, "result JSON output (default stdout)");
  tune->add_option("--ks", tune_args.ks, "k candidates")
      ->capture_default_str()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  tune->add_option("--folds", tune_args.folds, "cross-validation folds")
      ->capture_default_str()
      ->check(CLI::Range(2u, 1000000u));
  tune->add_option("--seed", tune_args.seed, "fold assignment seed")
      ->capture_default_str();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "train/test split accuracy evaluation");
  eval->add_option("--in", eval_args.in, "labeled feature CSV input")
      ->required();
  eval->add_option("--out", eval_args.out, "result JSON output (default stdout)");
  eval->add_option("--split", eval_args.split_fraction, "train fraction, in (0, 1)")
      ->required();
  eval->add_option("--k", eval_args.k, "neighbor count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  eval->add_option("--selector", eval_args.selector, "neighbor selection strategy")
      ->capture_default_str()
      ->check(CLI::IsMember(kStrategyNames));
  eval->add_option("--seed", eval_args.seed, "split seed")->capture_default_str();

  BenchArgs bench_args;
  bench_args.spec.ks = {5};
  auto* bench = app.add_subcommand("bench", "selector micro-benchmark with exact counters");
  bench->add_option("--sizes", bench_args.spec.sizes, "input sizes n")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--ks", bench_args.spec.ks, "neighbor counts k")
      ->capture_default_str()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--strategies", bench_args.strategies, "strategies to run")
      ->capture_default_str()
      ->delimiter(',')
      ->check(CLI::IsMember(kStrategyNames));
  bench->add_option("--reps", bench_args.spec.reps, "repetitions per cell")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_args.spec.seed, "input generation seed")
      ->capture_default_str();
  bench->add_option("--out", bench_args.out, "report JSON output (default stdout)");

  ClassifyArgs classify_args;
  auto* classify_cmd = app.add_subcommand(
      "classify", "classify unlabeled feature rows against a labeled model file");
  classify_cmd->add_option("--model", classify_args.model, "labeled feature CSV model")
      ->required();
  classify_cmd->add_option("--in", classify_args.in, "unlabeled feature CSV queries")
      ->required();
  classify_cmd->add_option("--out", classify_args.out, "verdict output (default stdout)");
  classify_cmd->add_option("--k", classify_args.k, "neighbor count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  classify_cmd
      ->add_option("--selector", classify_args.selector, "neighbor selection strategy")
      ->capture_default_str()
      ->check(CLI::IsMember(kStrategyNames));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  // eval --split bounds are exclusive, which CLI::Range cannot express.
  if (app.got_subcommand(eval) &&
      !(eval_args.split_fraction > 0.0 && eval_args.split_fraction < 1.0)) {
    std::cerr << "flowknn eval: --split must be strictly between 0 and 1\n";
    return 2;
  }

  try {
    if (app.got_subcommand(extract)) return run_extract(extract_args);
    if (app.got_subcommand(synth)) return run_synth(synth_args);
    if (app.got_subcommand(tune)) return run_tune(tune_args);
    if (app.got_subcommand(eval)) return run_eval(eval_args);
    if (app.got_subcommand(bench)) return run_bench(bench_args);
    if (app.got_subcommand(classify_cmd)) return run_classify(classify_args);
  } catch (const std::exception& e) {
    log_error(e.what());
    return 1;
  }
  return 0;
}
