#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ragmon/retrieval.hpp"
#include "ragmon/telemetry.hpp"

namespace ragmon {

enum class Protocol { kTcp, kUdp, kHttp, kIcmp };

// Hosts are numbered 1..switch_count*hosts_per_switch; host h sits on switch
// (h-1)/hosts_per_switch + 1 at port "s<switch>-eth<position>". Server lists
// hold host numbers; all remaining hosts act as clients.
struct TopologyConfig {
  int switch_count = 6;
  int hosts_per_switch = 5;
  std::vector<int> tcp_servers{5, 15, 25};
  std::vector<int> udp_servers{10, 20, 30};
  std::vector<int> http_servers{9, 24};
  std::vector<int> attackers{2, 7, 12, 17};

  int host_count() const { return switch_count * hosts_per_switch; }
  bool is_server(int host) const;
};

// One carpet-bombing burst: the aggregate rate is split evenly over the
// attackers, and each attacker splits its share over one TCP-flood and one
// UDP-flood stream toward distinct servers.
struct AttackPhase {
  double start_s = 0.0;
  double end_s = 0.0;
  double aggregate_pps = 100000.0;
};

struct BenignProfile {
  double min_flow_pps = 5.0;
  double max_flow_pps = 500.0;
  double flow_renew_probability = 0.3;
};

struct ScenarioConfig {
  std::string name = "benign";
  double duration_s = 300.0;
  std::uint64_t seed = 1;
  BenignProfile benign;
  std::vector<AttackPhase> attacks;
  double attack_min_packet_bytes = 160.0;
  double attack_max_packet_bytes = 173.0;
};

// Observability for the window covered by the most recent advance().
struct WindowStats {
  double start_s = 0.0;
  double end_s = 0.0;
  std::uint64_t packet_in_count = 0;
  double controller_load_proxy = 0.0;
  std::uint64_t packets_emitted = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t attack_packets_emitted = 0;
  std::uint64_t attack_packets_delivered = 0;
};

struct FabricSnapshot {
  double now_s = 0.0;
  std::vector<InterfaceCounters> ports;
  std::vector<std::string> dropped_ports;
  WindowStats window;
};

// Deterministic switch-fabric model on a logical clock. All randomness comes
// from the scenario seed; traffic draws do not depend on drop state, so runs
// that differ only in mitigation see identical offered load and their
// counters can be diffed window by window.
//
// Per-port counters follow the switch's view of the attached host: rx is
// what the host sends into the fabric, tx what the fabric delivers to it.
// A drop rule absorbs traffic at the source port after the rx counters and
// before any forwarding, so dropped packets produce no deliveries, no
// responses and no packet-in events.
class Fabric {
 public:
  Fabric(TopologyConfig topology, ScenarioConfig scenario);

  // Advances the logical clock by dt_s (one monitoring window) and applies
  // all traffic for the interval. dt_s must be positive.
  void advance(double dt_s);

  InterfaceCounters poll_counters(const std::string& port_id) const;

  // Idempotent; unknown port ids throw std::invalid_argument.
  void install_drop(const std::string& port_id);
  void remove_drop(const std::string& port_id);
  bool is_dropped(const std::string& port_id) const;

  double now_s() const { return now_s_; }
  const std::vector<std::string>& host_ports() const { return host_ports_; }
  std::string port_for_host(int host) const;

  // Ground truth: whether this port belongs to an attacker whose schedule
  // overlaps [t0_s, t1_s).
  bool port_attack_active(const std::string& port_id, double t0_s,
                          double t1_s) const;

  const WindowStats& window() const { return window_; }
  FabricSnapshot snapshot() const;

  const TopologyConfig& topology() const { return topology_; }
  const ScenarioConfig& scenario() const { return scenario_; }

 private:
  struct PortState {
    std::string id;
    int host = 0;  // 0 for uplink ports
    std::uint64_t rx_packets = 0, rx_bytes = 0;
    std::uint64_t tx_packets = 0, tx_bytes = 0;
  };

  struct FlowState {
    int server = 0;
    Protocol proto = Protocol::kTcp;
    double pps = 0.0;
  };

  struct Emission {
    int src_host = 0;
    int dst_host = 0;
    Protocol proto = Protocol::kTcp;
    std::uint64_t packets = 0;
    double packet_bytes = 0.0;
    double response_packet_bytes = 0.0;
    bool attack = false;
  };

  PortState& port_state(const std::string& port_id);
  const PortState& port_state(const std::string& port_id) const;
  PortState& host_port(int host);
  void deliver(const Emission& emission);
  int switch_of(int host) const;

  TopologyConfig topology_;
  ScenarioConfig scenario_;
  std::mt19937_64 rng_;
  double now_s_ = 0.0;

  std::vector<PortState> ports_;
  std::map<std::string, std::size_t> port_by_id_;
  std::vector<std::string> host_ports_;
  std::map<int, FlowState> flows_;  // client host -> active flow
  std::set<std::tuple<int, int, int>> forwarding_;
  std::set<std::string> drops_;
  WindowStats window_;
};

struct TrafficSample {
  InterfaceFeatures features;
  int label = 0;
  SampleMetadata meta;
};

struct DatasetSpec {
  TopologyConfig topology;
  std::vector<ScenarioConfig> scenarios;
  double window_s = 10.0;
  // 0 keeps the full pool; otherwise the pool is subsampled (seeded) to this
  // size at attack_fraction, the attack quota spread evenly across the
  // scenarios that produced attack windows.
  std::size_t target_records = 2000;
  double attack_fraction = 0.45;
  std::uint64_t seed = 1;
};

// Runs every scenario, samples all host ports each window, labels windows by
// attacker schedule, then subsamples per the spec. Output is sorted by
// (scenario, window, port) and deterministic for a given spec. Throws when a
// pool cannot cover its quota.
std::vector<TrafficSample> generate_dataset(const DatasetSpec& spec);

// One benign scenario plus the four attack intensities (100000, 66666,
// 40000, 20000 aggregate pps), attack phases aligned to 10 s windows.
std::vector<ScenarioConfig> default_scenarios(std::uint64_t seed);

}  // namespace ragmon
