#include "flowknn/eval.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace flowknn {
namespace {

bool same_label_tables(const Dataset& a, const Dataset& b) {
  if (a.label_table.size() != b.label_table.size()) return false;
  for (std::size_t i = 0; i < a.label_table.size(); ++i)
    if (a.label_table[i].ordinal != b.label_table[i].ordinal ||
        a.label_table[i].name != b.label_table[i].name)
      return false;
  return true;
}

}  // namespace

TuneResult tune_k(const Dataset& data, std::span<const std::uint32_t> k_candidates,
                  std::uint32_t folds, std::uint64_t seed) {
  if (k_candidates.empty())
    throw std::invalid_argument("tune_k: no k candidates");
  for (const std::uint32_t k : k_candidates)
    if (k < 1) throw std::invalid_argument("tune_k: candidates must be >= 1");

  std::vector<std::uint32_t> candidates(k_candidates.begin(), k_candidates.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const KfoldAssignment assignment = kfold_assign(data, folds, seed);

  std::vector<std::size_t> fold_sizes(folds, 0);
  for (const std::uint32_t f : assignment.fold_of) fold_sizes[f]++;
  std::size_t min_train = data.size();
  for (const std::size_t size : fold_sizes)
    min_train = std::min(min_train, data.size() - size);

  TuneResult result;
  result.folds = folds;
  result.seed = seed;
  result.stratified = assignment.stratified;

  std::vector<std::uint32_t> kept;
  for (const std::uint32_t k : candidates) {
    if (k > min_train) result.skipped.push_back(k);
    else kept.push_back(k);
  }
  if (kept.empty())
    throw std::invalid_argument("tune_k: every candidate exceeds the training fold size");

  // correct[candidate][fold]
  std::vector<std::vector<std::uint64_t>> correct(
      kept.size(), std::vector<std::uint64_t>(folds, 0));

  std::vector<double> distances;
  std::vector<std::uint32_t> labels;
  for (std::uint32_t fold = 0; fold < folds; ++fold) {
    std::vector<std::uint32_t> train_idx;
    std::vector<std::uint32_t> val_idx;
    for (std::uint32_t i = 0; i < data.size(); ++i)
      (assignment.fold_of[i] == fold ? val_idx : train_idx).push_back(i);

    for (const std::uint32_t v : val_idx) {
      // One distance pass per validation sample, shared by all candidates.
      distances.resize(train_idx.size());
      labels.resize(train_idx.size());
      const auto q = data.samples[v].features.coords();
      for (std::size_t t = 0; t < train_idx.size(); ++t) {
        const auto c = data.samples[train_idx[t]].features.coords();
        distances[t] =
            manhattan(std::span<const double>(q), std::span<const double>(c));
        labels[t] = data.samples[train_idx[t]].label;
      }
      for (std::size_t ci = 0; ci < kept.size(); ++ci) {
        const SelectionResult sel =
            kmin_select({distances, labels, kept[ci]}, {.timing = false});
        if (mode_with_tiebreak(sel.neighbors) == data.samples[v].label)
          ++correct[ci][fold];
      }
    }
  }

  double best_score = -1.0;
  for (std::size_t ci = 0; ci < kept.size(); ++ci) {
    double mean = 0.0;
    for (std::uint32_t fold = 0; fold < folds; ++fold)
      mean += static_cast<double>(correct[ci][fold]) /
              static_cast<double>(fold_sizes[fold]);
    mean /= static_cast<double>(folds);
    result.scores.emplace_back(kept[ci], mean);
    if (mean > best_score) {  // strict: ascending order already favors smaller k
      best_score = mean;
      result.best_k = kept[ci];
    }
  }
  return result;
}

std::string tune_result_to_json(const TuneResult& result) {
  nlohmann::ordered_json doc;
  doc["folds"] = result.folds;
  doc["seed"] = result.seed;
  doc["scores"] = nlohmann::ordered_json::object();
  for (const auto& [k, score] : result.scores)
    doc["scores"][std::to_string(k)] = score;
  doc["best_k"] = result.best_k;
  doc["skipped"] = result.skipped;
  doc["stratified"] = result.stratified;
  return doc.dump();
}

EvalResult evaluate(const Dataset& train, const Dataset& test, const KnnConfig& config) {
  if (train.samples.empty() || test.samples.empty())
    throw std::invalid_argument("evaluate: train and test must be non-empty");
  if (!same_label_tables(train, test))
    throw std::invalid_argument("evaluate: label tables differ");

  const std::size_t classes = train.class_count();
  EvalResult result;
  result.test_count = test.size();
  result.confusion.assign(classes, std::vector<std::uint64_t>(classes, 0));

  std::uint64_t correct = 0;
  for (const LabeledSample& sample : test.samples) {
    const Classification c = classify(train, sample.features, config);
    result.confusion[sample.label][c.label]++;
    if (c.label == sample.label) ++correct;
  }
  result.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());

  // Macro F1 over all table classes; absent classes contribute 0.
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    std::uint64_t tp = result.confusion[c][c];
    std::uint64_t fn = 0, fp = 0;
    for (std::size_t o = 0; o < classes; ++o) {
      if (o == c) continue;
      fn += result.confusion[c][o];
      fp += result.confusion[o][c];
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    f1_sum += denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
  }
  result.macro_f1 = f1_sum / static_cast<double>(classes);
  return result;
}

std::string eval_result_to_json(const EvalResult& result,
                                std::span<const ClassLabel> labels,
                                const KnnConfig& config, std::uint64_t seed,
                                double split_fraction) {
  nlohmann::ordered_json doc;
  doc["accuracy"] = result.accuracy;
  doc["macro_f1"] = result.macro_f1;
  doc["test_count"] = result.test_count;
  doc["k"] = config.k;
  doc["selector"] = to_string(config.selector);
  doc["seed"] = seed;
  doc["split"] = split_fraction;
  doc["labels"] = nlohmann::ordered_json::array();
  for (const ClassLabel& l : labels)
    doc["labels"].push_back({{"ordinal", l.ordinal}, {"name", l.name}});
  doc["confusion"] = result.confusion;
  return doc.dump();
}

}  // namespace flowknn
