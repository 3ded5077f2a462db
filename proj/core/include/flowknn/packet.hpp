#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace flowknn {

enum class Protocol : std::uint8_t { icmp, tcp, udp, other };
enum class Direction : std::uint8_t { inbound, outbound };

// Wire tokens used by the packet CSV schema.
std::string_view to_string(Protocol protocol);
std::string_view to_string(Direction direction);
std::optional<Protocol> protocol_from_string(std::string_view token);
std::optional<Direction> direction_from_string(std::string_view token);

// One observed packet, as captured by a sniffer and exported to CSV.
// direction is relative to device_id: outbound means the device sent it.
struct PacketMeta {
  double timestamp = 0.0;  // seconds since epoch, fractional allowed
  std::string device_id;
  std::string src_ip;
  std::string dst_ip;
  Protocol protocol = Protocol::other;
  std::uint64_t size = 0;  // bytes
  Direction direction = Direction::inbound;

  // The peer the device talked to: dst for outbound, src for inbound.
  const std::string& remote_ip() const {
    return direction == Direction::outbound ? dst_ip : src_ip;
  }
};

}  // namespace flowknn
