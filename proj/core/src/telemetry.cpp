#include "ragmon/telemetry.hpp"

#include <stdexcept>

namespace ragmon {

namespace {

std::uint64_t moved(std::uint64_t prev, std::uint64_t curr) {
  // Backwards movement means the device counter reset; the window then saw
  // everything accumulated since the reset.
  return curr >= prev ? curr - prev : curr;
}

}  // namespace

CounterDelta window_delta(const InterfaceCounters& prev,
                          const InterfaceCounters& curr) {
  if (prev.port_id != curr.port_id) {
    throw std::invalid_argument("window_delta: port mismatch (" +
                                prev.port_id + " vs " + curr.port_id + ")");
  }
  if (!(curr.timestamp_s > prev.timestamp_s)) {
    throw std::invalid_argument("window_delta: non-positive elapsed time on " +
                                curr.port_id);
  }
  CounterDelta d;
  d.port_id = curr.port_id;
  d.elapsed_s = curr.timestamp_s - prev.timestamp_s;
  d.rx_packets = moved(prev.rx_packets, curr.rx_packets);
  d.rx_bytes = moved(prev.rx_bytes, curr.rx_bytes);
  d.tx_packets = moved(prev.tx_packets, curr.tx_packets);
  d.tx_bytes = moved(prev.tx_bytes, curr.tx_bytes);
  return d;
}

InterfaceFeatures compute_features(const CounterDelta& delta) {
  if (!(delta.elapsed_s > 0.0)) {
    throw std::invalid_argument("compute_features: elapsed_s must be > 0");
  }
  auto direction = [&](std::uint64_t packets, std::uint64_t bytes) {
    DirectionStats s;
    s.packets = packets;
    s.bytes = bytes;
    s.packets_per_second = static_cast<double>(packets) / delta.elapsed_s;
    s.bytes_per_second = static_cast<double>(bytes) / delta.elapsed_s;
    s.avg_packet_size =
        packets == 0 ? 0.0
                     : static_cast<double>(bytes) / static_cast<double>(packets);
    return s;
  };
  InterfaceFeatures f;
  f.received = direction(delta.rx_packets, delta.rx_bytes);
  f.sent = direction(delta.tx_packets, delta.tx_bytes);
  return f;
}

}  // namespace ragmon
