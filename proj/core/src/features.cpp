#include "flowknn/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace flowknn {

std::string_view to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::icmp: return "ICMP";
    case Protocol::tcp: return "TCP";
    case Protocol::udp: return "UDP";
    case Protocol::other: return "OTHER";
  }
  return "OTHER";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::inbound ? "INBOUND" : "OUTBOUND";
}

std::optional<Protocol> protocol_from_string(std::string_view token) {
  if (token == "ICMP") return Protocol::icmp;
  if (token == "TCP") return Protocol::tcp;
  if (token == "UDP") return Protocol::udp;
  if (token == "OTHER") return Protocol::other;
  return std::nullopt;
}

std::optional<Direction> direction_from_string(std::string_view token) {
  if (token == "INBOUND") return Direction::inbound;
  if (token == "OUTBOUND") return Direction::outbound;
  return std::nullopt;
}

std::vector<FlowWindow> windowize(std::span<const PacketMeta> packets,
                                  double window_length) {
  if (!(window_length > 0.0))
    throw std::invalid_argument("windowize: window_length must be positive");

  // (device_id, window_start) -> window; std::map gives the output order.
  std::map<std::pair<std::string, double>, FlowWindow> buckets;
  for (const PacketMeta& p : packets) {
    double start = std::floor(p.timestamp / window_length) * window_length;
    // Re-anchor when the division rounded across a window boundary.
    if (p.timestamp < start) start -= window_length;
    else if (p.timestamp >= start + window_length) start += window_length;

    auto key = std::make_pair(p.device_id, start);
    auto it = buckets.find(key);
    if (it == buckets.end()) {
      FlowWindow w;
      w.device_id = p.device_id;
      w.window_start = start;
      w.window_length = window_length;
      it = buckets.emplace(std::move(key), std::move(w)).first;
    }
    it->second.packets.push_back(p);
  }

  std::vector<FlowWindow> out;
  out.reserve(buckets.size());
  for (auto& [key, window] : buckets) out.push_back(std::move(window));
  return out;
}

FeatureVector extract_features(const FlowWindow& window) {
  FeatureVector fv;
  const std::size_t n = window.packets.size();
  if (n == 0) return fv;

  std::uint64_t icmp = 0, tcp = 0, udp = 0;
  std::uint64_t total_bytes = 0;
  std::unordered_set<std::string_view> remotes;
  remotes.reserve(n);
  for (const PacketMeta& p : window.packets) {
    switch (p.protocol) {
      case Protocol::icmp: ++icmp; break;
      case Protocol::tcp: ++tcp; break;
      case Protocol::udp: ++udp; break;
      case Protocol::other: break;
    }
    total_bytes += p.size;
    remotes.insert(p.remote_ip());
  }

  const double count = static_cast<double>(n);
  fv.icmp_pct = static_cast<double>(icmp) / count;
  fv.tcp_pct = static_cast<double>(tcp) / count;
  fv.udp_pct = static_cast<double>(udp) / count;
  fv.ip_diversity = static_cast<double>(remotes.size()) / count;
  fv.packet_count = n;
  fv.mean_packet_size = static_cast<double>(total_bytes) / count;
  return fv;
}

}  // namespace flowknn
