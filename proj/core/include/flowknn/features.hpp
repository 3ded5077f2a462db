#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "flowknn/packet.hpp"

namespace flowknn {

// All packets one device produced or received inside one tumbling polling
// interval [window_start, window_start + window_length).
struct FlowWindow {
  std::string device_id;
  double window_start = 0.0;
  double window_length = 20.0;
  std::vector<PacketMeta> packets;
};

// The six-dimensional point one window reduces to. Protocol percentages are
// fractions of the window's packet count (packets of other protocols count in
// the denominator only); ip_diversity is distinct remote peers over packet
// count. An empty window is the all-zero vector.
struct FeatureVector {
  double icmp_pct = 0.0;
  double tcp_pct = 0.0;
  double udp_pct = 0.0;
  double ip_diversity = 0.0;
  std::uint64_t packet_count = 0;
  double mean_packet_size = 0.0;

  std::array<double, 6> coords() const {
    return {icmp_pct, tcp_pct,
            udp_pct,  ip_diversity,
            static_cast<double>(packet_count), mean_packet_size};
  }
};

// Groups packets (any order) into per-device tumbling windows aligned to
// multiples of window_length, half-open on the right. Empty windows are not
// emitted; output is sorted by (device_id, window_start) and keeps the input
// packet order within each window. window_length must be positive.
std::vector<FlowWindow> windowize(std::span<const PacketMeta> packets,
                                  double window_length);

FeatureVector extract_features(const FlowWindow& window);

}  // namespace flowknn
