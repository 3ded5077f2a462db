#pragma once

#include <cstdint>

#include "flowknn/dataset.hpp"

namespace flowknn {

// Seeded generator of labeled traffic-shaped feature clusters, used where a
// real capture corpus is not available. Classes 0..classes-2 are benign
// devices ("device-0", ...); the last class ("ddos-udp") mimics a spoofed
// UDP flood: udp share and remote-IP diversity near 1 and a high packet
// count.
struct SynthSpec {
  std::uint32_t classes = 5;           // >= 2
  std::uint32_t samples_per_class = 2000;  // >= 1
  double cluster_spread = 0.05;        // >= 0; 0 collapses each class to its center
  std::uint64_t seed = 0;
};

// Per class, a cluster center is drawn from the seed inside the valid
// feature domain (centers are re-drawn while they sit too close to an
// earlier one); samples are the center plus bounded per-coordinate noise of
// magnitude cluster_spread, clamped back into the domain. Samples are
// ordered by class, then by index. Deterministic in the spec.
Dataset synth_generate(const SynthSpec& spec);

}  // namespace flowknn
