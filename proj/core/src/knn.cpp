#include "flowknn/knn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace flowknn {

double manhattan(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("manhattan: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

double manhattan(const FeatureVector& a, const FeatureVector& b) {
  const auto ca = a.coords();
  const auto cb = b.coords();
  return manhattan(std::span<const double>(ca), std::span<const double>(cb));
}

std::uint32_t mode_with_tiebreak(const NeighborSet& neighbors) {
  if (neighbors.entries.empty())
    throw std::invalid_argument("mode_with_tiebreak: empty neighbor set");

  // ordinal -> that label's neighbor distances
  std::map<std::uint32_t, std::vector<double>> groups;
  for (const Neighbor& n : neighbors.entries) groups[n.label].push_back(n.distance);

  std::uint32_t best_label = 0;
  std::size_t best_count = 0;
  double best_sum = 0.0;
  bool first = true;
  for (auto& [label, distances] : groups) {
    std::sort(distances.begin(), distances.end());
    double sum = 0.0;
    for (const double d : distances) sum += d;
    const std::size_t count = distances.size();
    // Map iteration is in ascending ordinal order, so requiring a strict
    // improvement resolves the final tie toward the smaller ordinal.
    if (first || count > best_count || (count == best_count && sum < best_sum)) {
      best_label = label;
      best_count = count;
      best_sum = sum;
      first = false;
    }
  }
  return best_label;
}

Classification classify(const Dataset& train, const FeatureVector& query,
                        const KnnConfig& config, const SelectOptions& options) {
  if (train.samples.empty())
    throw std::invalid_argument("classify: training set is empty");
  if (config.k < 1) throw std::invalid_argument("classify: k must be >= 1");

  const std::size_t n = train.samples.size();
  std::vector<double> distances(n);
  std::vector<std::uint32_t> labels(n);
  const auto q = query.coords();
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = train.samples[i].features.coords();
    distances[i] = manhattan(std::span<const double>(q), std::span<const double>(t));
    labels[i] = train.samples[i].label;
  }

  SelectionResult selected =
      run_selector(config.selector, {distances, labels, config.k}, options);

  Classification out;
  out.label = mode_with_tiebreak(selected.neighbors);
  out.neighbors = std::move(selected.neighbors);
  out.stats = selected.stats;
  return out;
}

}  // namespace flowknn
