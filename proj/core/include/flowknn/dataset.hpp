#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowknn/csv.hpp"
#include "flowknn/features.hpp"

namespace flowknn {

struct ClassLabel {
  std::uint32_t ordinal = 0;
  std::string name;
};

// label is an ordinal into the owning Dataset's label_table.
struct LabeledSample {
  FeatureVector features;
  std::uint32_t label = 0;
};

struct Dataset {
  std::vector<LabeledSample> samples;
  std::vector<ClassLabel> label_table;  // ordinal == index, names unique

  std::size_t size() const { return samples.size(); }
  std::size_t class_count() const { return label_table.size(); }
  const std::string& label_name(std::uint32_t ordinal) const {
    return label_table.at(ordinal).name;
  }
  // samples per class, indexed by ordinal
  std::vector<std::size_t> class_counts() const;
};

struct SplitSpec {
  double train_fraction = 0.5;  // in (0, 1)
  std::uint64_t seed = 0;
};

struct Split {
  Dataset train;
  Dataset test;
};

// Stratified split: per class, floor(train_fraction * class_count) samples
// (at least 1 when the class has >= 2) go to train, the rest to test. Which
// samples land where is a seeded shuffle of each class's index list; both
// halves keep the original dataset order.
Split split(const Dataset& data, const SplitSpec& spec);

struct KfoldAssignment {
  std::vector<std::uint32_t> fold_of;  // one fold index in [0, folds) per sample
  std::uint32_t folds = 0;
  // false when some class had fewer samples than folds and the assignment
  // fell back to a plain (non-stratified) shuffle
  bool stratified = true;
};

// Stratified fold assignment: per class, fold sizes differ by at most one.
// Requires folds >= 2 and at least folds samples.
KfoldAssignment kfold_assign(const Dataset& data, std::uint32_t folds,
                             std::uint64_t seed);

// Builds a dataset from labeled feature rows; ordinals are assigned by first
// appearance. Throws if any row is unlabeled.
Dataset dataset_from_rows(std::span<const FeatureRow> rows);

// Renders a dataset back to labeled rows: device_id is the class name and
// window_start advances by window_length per sample within a class.
std::vector<FeatureRow> to_feature_rows(const Dataset& data,
                                        double window_length = 20.0);

// {"labels":[{"ordinal":0,"name":"..."}]}
std::string label_table_to_json(std::span<const ClassLabel> labels);
std::vector<ClassLabel> label_table_from_json(std::string_view json_text);

}  // namespace flowknn
