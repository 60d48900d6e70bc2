#pragma once

#include <cstdint>
#include <string>

namespace ragmon {

// Cumulative port counters as polled from a switch. rx counts traffic the
// attached host sends into the switch, tx counts traffic delivered to it.
struct InterfaceCounters {
  std::string port_id;
  double timestamp_s = 0.0;
  std::uint64_t rx_packets = 0;
  std::uint64_t rx_bytes = 0;
  std::uint64_t tx_packets = 0;
  std::uint64_t tx_bytes = 0;
};

// Counter movement over one monitoring window.
struct CounterDelta {
  std::string port_id;
  double elapsed_s = 0.0;
  std::uint64_t rx_packets = 0;
  std::uint64_t rx_bytes = 0;
  std::uint64_t tx_packets = 0;
  std::uint64_t tx_bytes = 0;
};

struct DirectionStats {
  std::uint64_t packets = 0;
  std::uint64_t bytes = 0;
  double packets_per_second = 0.0;
  double bytes_per_second = 0.0;
  double avg_packet_size = 0.0;
};

// The ten per-window features. received mirrors rx, sent mirrors tx.
struct InterfaceFeatures {
  DirectionStats received;
  DirectionStats sent;
};

// prev and curr must be the same port and curr must be strictly later.
// A counter that moved backwards is treated as a device reset: that
// counter's delta is curr's value (each counter judged independently).
CounterDelta window_delta(const InterfaceCounters& prev,
                          const InterfaceCounters& curr);

// Rates divide by elapsed_s; avg sizes divide bytes by packets and are 0
// when the window carried no packets. elapsed_s must be positive.
InterfaceFeatures compute_features(const CounterDelta& delta);

}  // namespace ragmon
