#pragma once

#include <cstdint>
#include <limits>
#include <span>

#include "flowknn/dataset.hpp"
#include "flowknn/selectors.hpp"

namespace flowknn {

// Compares greater than every finite distance; selector slots start here.
inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

// Sum of absolute coordinate differences. No square roots anywhere in the
// classification path.
double manhattan(std::span<const double> a, std::span<const double> b);
double manhattan(const FeatureVector& a, const FeatureVector& b);

struct KnnConfig {
  std::uint32_t k = 5;
  Strategy selector = Strategy::kmin;
};

struct Classification {
  std::uint32_t label = 0;
  NeighborSet neighbors;
  SelectionStats stats;
};

// Majority label of the neighbor set. Ties break toward the smaller sum of
// that label's neighbor distances, then toward the smaller ordinal; the sums
// are accumulated in ascending distance order so the winner does not depend
// on the order a selector emitted the neighbors in.
std::uint32_t mode_with_tiebreak(const NeighborSet& neighbors);

// Distances from the query to every training sample, the configured
// selector's min(k, n) nearest, then the mode. stats are the selector's
// counters for this call.
Classification classify(const Dataset& train, const FeatureVector& query,
                        const KnnConfig& config, const SelectOptions& options = {});

}  // namespace flowknn
