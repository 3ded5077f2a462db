#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowknn/dataset.hpp"
#include "flowknn/knn.hpp"

namespace flowknn {

struct TuneResult {
  std::uint32_t folds = 0;
  std::uint64_t seed = 0;
  // (k, mean cross-validation accuracy), ascending k
  std::vector<std::pair<std::uint32_t, double>> scores;
  std::uint32_t best_k = 0;  // max mean accuracy, ties toward smaller k
  std::vector<std::uint32_t> skipped;  // candidates larger than the smallest training fold
  bool stratified = true;
};

// Cross-validated accuracy per candidate k. Folds come from kfold_assign;
// each fold is scored with the kmin selector and the mean of the per-fold
// accuracies is reported. Candidates are deduplicated and evaluated in
// ascending order. Deterministic in (data, candidates, folds, seed).
TuneResult tune_k(const Dataset& data, std::span<const std::uint32_t> k_candidates,
                  std::uint32_t folds, std::uint64_t seed);

// {"folds":...,"seed":...,"scores":{"1":...},"best_k":...,"skipped":[...],
//  "stratified":...}
std::string tune_result_to_json(const TuneResult& result);

struct EvalResult {
  double accuracy = 0.0;
  double macro_f1 = 0.0;  // auxiliary; accuracy is the reported metric
  std::uint64_t test_count = 0;
  // confusion[true_ordinal][predicted_ordinal]; rows sum to per-class test counts
  std::vector<std::vector<std::uint64_t>> confusion;
};

// Classifies every test sample against the training set. The label tables of
// both datasets must be identical.
EvalResult evaluate(const Dataset& train, const Dataset& test, const KnnConfig& config);

std::string eval_result_to_json(const EvalResult& result,
                                std::span<const ClassLabel> labels,
                                const KnnConfig& config, std::uint64_t seed,
                                double split_fraction);

}  // namespace flowknn
