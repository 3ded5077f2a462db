#include "flowknn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "flowknn/rng.hpp"

namespace flowknn {
namespace {

// Salts for deriving independent RNG streams from one user seed.
constexpr std::uint64_t kSplitSalt = 0x53504c49;  // "SPLI"
constexpr std::uint64_t kFoldSalt = 0x464f4c44;   // "FOLD"

std::vector<std::vector<std::uint32_t>> indices_by_class(const Dataset& data) {
  std::vector<std::vector<std::uint32_t>> per_class(data.class_count());
  for (std::uint32_t i = 0; i < data.samples.size(); ++i) {
    const std::uint32_t ordinal = data.samples[i].label;
    if (ordinal >= per_class.size())
      throw std::invalid_argument("dataset: sample label not in label table");
    per_class[ordinal].push_back(i);
  }
  return per_class;
}

}  // namespace

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(label_table.size(), 0);
  for (const LabeledSample& s : samples) counts.at(s.label)++;
  return counts;
}

Split split(const Dataset& data, const SplitSpec& spec) {
  if (data.samples.empty()) throw std::invalid_argument("split: dataset is empty");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw std::invalid_argument("split: train_fraction must be in (0, 1)");

  auto per_class = indices_by_class(data);
  std::vector<char> in_train(data.samples.size(), 0);
  for (std::uint32_t ordinal = 0; ordinal < per_class.size(); ++ordinal) {
    auto& idx = per_class[ordinal];
    if (idx.empty()) continue;
    const std::size_t count = idx.size();
    // The small epsilon absorbs the binary representation error of decimal
    // fractions (0.3 * 10 must floor to 3, not 2).
    std::size_t n_train = static_cast<std::size_t>(
        std::floor(spec.train_fraction * static_cast<double>(count) + 1e-9));
    if (count >= 2) n_train = std::min(std::max<std::size_t>(n_train, 1), count - 1);
    else n_train = 0;

    Rng rng(Rng::mix(Rng::mix(spec.seed, kSplitSalt), ordinal));
    rng.shuffle(std::span<std::uint32_t>(idx));
    for (std::size_t i = 0; i < n_train; ++i) in_train[idx[i]] = 1;
  }

  Split out;
  out.train.label_table = data.label_table;
  out.test.label_table = data.label_table;
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    (in_train[i] ? out.train : out.test).samples.push_back(data.samples[i]);
  }
  return out;
}

KfoldAssignment kfold_assign(const Dataset& data, std::uint32_t folds,
                             std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("kfold: folds must be >= 2");
  if (data.samples.size() < folds)
    throw std::invalid_argument("kfold: need at least `folds` samples");

  KfoldAssignment out;
  out.folds = folds;
  out.fold_of.assign(data.samples.size(), 0);

  auto per_class = indices_by_class(data);
  out.stratified = std::all_of(per_class.begin(), per_class.end(),
                               [&](const auto& idx) {
                                 return idx.empty() || idx.size() >= folds;
                               });

  if (out.stratified) {
    for (std::uint32_t ordinal = 0; ordinal < per_class.size(); ++ordinal) {
      auto& idx = per_class[ordinal];
      Rng rng(Rng::mix(Rng::mix(seed, kFoldSalt), ordinal));
      rng.shuffle(std::span<std::uint32_t>(idx));
      // Deal round-robin; the start fold rotates by class so remainders do
      // not all pile onto fold 0.
      const std::uint32_t start = ordinal % folds;
      for (std::size_t i = 0; i < idx.size(); ++i)
        out.fold_of[idx[i]] = static_cast<std::uint32_t>((start + i) % folds);
    }
  } else {
    std::vector<std::uint32_t> idx(data.samples.size());
    for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(Rng::mix(seed, kFoldSalt));
    rng.shuffle(std::span<std::uint32_t>(idx));
    for (std::size_t i = 0; i < idx.size(); ++i)
      out.fold_of[idx[i]] = static_cast<std::uint32_t>(i % folds);
  }
  return out;
}

Dataset dataset_from_rows(std::span<const FeatureRow> rows) {
  Dataset data;
  std::unordered_map<std::string, std::uint32_t> ordinal_of;
  for (const FeatureRow& r : rows) {
    if (!r.label) throw std::invalid_argument("dataset: row without label");
    auto [it, inserted] =
        ordinal_of.emplace(*r.label, static_cast<std::uint32_t>(data.label_table.size()));
    if (inserted) data.label_table.push_back({it->second, *r.label});
    data.samples.push_back({r.features, it->second});
  }
  return data;
}

std::vector<FeatureRow> to_feature_rows(const Dataset& data, double window_length) {
  std::vector<FeatureRow> rows;
  rows.reserve(data.samples.size());
  std::vector<std::size_t> emitted(data.class_count(), 0);
  for (const LabeledSample& s : data.samples) {
    FeatureRow r;
    r.device_id = data.label_name(s.label);
    r.window_start = window_length * static_cast<double>(emitted[s.label]++);
    r.features = s.features;
    r.label = data.label_name(s.label);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string label_table_to_json(std::span<const ClassLabel> labels) {
  nlohmann::ordered_json doc;
  doc["labels"] = nlohmann::ordered_json::array();
  for (const ClassLabel& l : labels)
    doc["labels"].push_back({{"ordinal", l.ordinal}, {"name", l.name}});
  return doc.dump();
}

std::vector<ClassLabel> label_table_from_json(std::string_view json_text) {
  const auto doc = nlohmann::json::parse(json_text);
  std::vector<ClassLabel> labels;
  for (const auto& item : doc.at("labels"))
    labels.push_back({item.at("ordinal").get<std::uint32_t>(),
                      item.at("name").get<std::string>()});
  std::sort(labels.begin(), labels.end(),
            [](const ClassLabel& a, const ClassLabel& b) { return a.ordinal < b.ordinal; });
  for (std::uint32_t i = 0; i < labels.size(); ++i)
    if (labels[i].ordinal != i)
      throw std::invalid_argument("label table: ordinals must be dense from 0");
  return labels;
}

}  // namespace flowknn
