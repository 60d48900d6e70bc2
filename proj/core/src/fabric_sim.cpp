#include "ragmon/fabric_sim.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <tuple>

#include "ragmon/rng.hpp"

namespace ragmon {

bool TopologyConfig::is_server(int host) const {
  auto in = [host](const std::vector<int>& v) {
    return std::find(v.begin(), v.end(), host) != v.end();
  };
  return in(tcp_servers) || in(udp_servers) || in(http_servers);
}

namespace {

void check_hosts(const std::vector<int>& hosts, int host_count,
                 const char* what) {
  for (int h : hosts) {
    if (h < 1 || h > host_count) {
      throw std::invalid_argument(std::string(what) + " host " +
                                  std::to_string(h) + " is outside 1.." +
                                  std::to_string(host_count));
    }
  }
}

constexpr double kTcpMinBytes = 1434.0, kTcpMaxBytes = 1447.0;
constexpr double kUdpMinBytes = 64.0, kUdpMaxBytes = 1400.0;
constexpr double kHttpMinBytes = 200.0, kHttpMaxBytes = 1200.0;
constexpr double kIcmpBytes = 98.0;
constexpr double kTcpAckBytes = 66.0;
constexpr double kHttpRespMinBytes = 600.0, kHttpRespMaxBytes = 1300.0;

// Controller load proxy: idle floor plus a packet-in rate term.
constexpr double kLoadIdle = 5.0;
constexpr double kLoadPerPacketIn = 0.0005;

}  // namespace

Fabric::Fabric(TopologyConfig topology, ScenarioConfig scenario)
    : topology_(std::move(topology)),
      scenario_(std::move(scenario)),
      rng_(scenario_.seed) {
  if (topology_.switch_count < 1 || topology_.hosts_per_switch < 1) {
    throw std::invalid_argument("topology needs at least one switch and host");
  }
  const int hosts = topology_.host_count();
  check_hosts(topology_.tcp_servers, hosts, "tcp server");
  check_hosts(topology_.udp_servers, hosts, "udp server");
  check_hosts(topology_.http_servers, hosts, "http server");
  check_hosts(topology_.attackers, hosts, "attacker");
  if (topology_.tcp_servers.empty() || topology_.udp_servers.empty()) {
    throw std::invalid_argument("need at least one tcp and one udp server");
  }
  for (int attacker : topology_.attackers) {
    if (topology_.is_server(attacker)) {
      throw std::invalid_argument("attacker " + std::to_string(attacker) +
                                  " cannot be a server");
    }
  }
  for (const auto& phase : scenario_.attacks) {
    if (!(phase.end_s > phase.start_s) || phase.aggregate_pps <= 0.0) {
      throw std::invalid_argument("attack phase must have positive span and rate");
    }
    if (topology_.attackers.empty()) {
      throw std::invalid_argument("attack phases need attackers in the topology");
    }
  }

  for (int s = 1; s <= topology_.switch_count; ++s) {
    for (int p = 1; p <= topology_.hosts_per_switch; ++p) {
      PortState port;
      port.id = "s" + std::to_string(s) + "-eth" + std::to_string(p);
      port.host = (s - 1) * topology_.hosts_per_switch + p;
      port_by_id_[port.id] = ports_.size();
      host_ports_.push_back(port.id);
      ports_.push_back(std::move(port));
    }
    PortState uplink;
    uplink.id = "s" + std::to_string(s) + "-eth" +
                std::to_string(topology_.hosts_per_switch + 1);
    uplink.host = 0;
    port_by_id_[uplink.id] = ports_.size();
    ports_.push_back(std::move(uplink));
  }
}

Fabric::PortState& Fabric::port_state(const std::string& port_id) {
  auto it = port_by_id_.find(port_id);
  if (it == port_by_id_.end()) {
    throw std::invalid_argument("unknown port: " + port_id);
  }
  return ports_[it->second];
}

const Fabric::PortState& Fabric::port_state(const std::string& port_id) const {
  auto it = port_by_id_.find(port_id);
  if (it == port_by_id_.end()) {
    throw std::invalid_argument("unknown port: " + port_id);
  }
  return ports_[it->second];
}

Fabric::PortState& Fabric::host_port(int host) {
  const int s = (host - 1) / topology_.hosts_per_switch;
  const int p = (host - 1) % topology_.hosts_per_switch;
  return ports_[static_cast<std::size_t>(s) *
                    (topology_.hosts_per_switch + 1) +
                p];
}

int Fabric::switch_of(int host) const {
  return (host - 1) / topology_.hosts_per_switch + 1;
}

std::string Fabric::port_for_host(int host) const {
  if (host < 1 || host > topology_.host_count()) {
    throw std::invalid_argument("unknown host: " + std::to_string(host));
  }
  const int s = (host - 1) / topology_.hosts_per_switch + 1;
  const int p = (host - 1) % topology_.hosts_per_switch + 1;
  return "s" + std::to_string(s) + "-eth" + std::to_string(p);
}

InterfaceCounters Fabric::poll_counters(const std::string& port_id) const {
  const PortState& port = port_state(port_id);
  return {port.id,       now_s_,       port.rx_packets,
          port.rx_bytes, port.tx_packets, port.tx_bytes};
}

void Fabric::install_drop(const std::string& port_id) {
  port_state(port_id);
  drops_.insert(port_id);
}

void Fabric::remove_drop(const std::string& port_id) {
  port_state(port_id);
  drops_.erase(port_id);
}

bool Fabric::is_dropped(const std::string& port_id) const {
  return drops_.count(port_id) != 0;
}

bool Fabric::port_attack_active(const std::string& port_id, double t0_s,
                                double t1_s) const {
  const PortState& port = port_state(port_id);
  if (port.host == 0 ||
      std::find(topology_.attackers.begin(), topology_.attackers.end(),
                port.host) == topology_.attackers.end()) {
    return false;
  }
  for (const auto& phase : scenario_.attacks) {
    if (phase.start_s < t1_s && phase.end_s > t0_s) return true;
  }
  return false;
}

void Fabric::deliver(const Emission& e) {
  PortState& src = host_port(e.src_host);
  const auto bytes = static_cast<std::uint64_t>(
      std::llround(static_cast<double>(e.packets) * e.packet_bytes));
  src.rx_packets += e.packets;
  src.rx_bytes += bytes;
  window_.packets_emitted += e.packets;
  if (e.attack) window_.attack_packets_emitted += e.packets;

  // A drop rule on the source port absorbs everything at ingress: nothing is
  // forwarded, no response comes back, no packet-in reaches the controller.
  if (drops_.count(src.id) != 0) return;

  PortState& dst = host_port(e.dst_host);
  dst.tx_packets += e.packets;
  dst.tx_bytes += bytes;
  window_.packets_delivered += e.packets;
  if (e.attack) window_.attack_packets_delivered += e.packets;

  const int src_switch = switch_of(e.src_host);
  const int dst_switch = switch_of(e.dst_host);
  if (src_switch != dst_switch) {
    auto& src_uplink = port_state("s" + std::to_string(src_switch) + "-eth" +
                                  std::to_string(topology_.hosts_per_switch + 1));
    auto& dst_uplink = port_state("s" + std::to_string(dst_switch) + "-eth" +
                                  std::to_string(topology_.hosts_per_switch + 1));
    src_uplink.tx_packets += e.packets;
    src_uplink.tx_bytes += bytes;
    dst_uplink.rx_packets += e.packets;
    dst_uplink.rx_bytes += bytes;
  }

  if (e.attack) {
    // Spoofed sources never match an installed flow, every packet punts.
    window_.packet_in_count += e.packets;
    return;
  }

  const auto proto = static_cast<int>(e.proto);
  if (forwarding_.insert({e.src_host, e.dst_host, proto}).second) {
    window_.packet_in_count += 1;
  }

  // Server reply on the reverse path, scaled per protocol.
  std::uint64_t reply_packets = 0;
  switch (e.proto) {
    case Protocol::kTcp:
    case Protocol::kHttp:
      reply_packets = e.packets / 2;
      break;
    case Protocol::kIcmp:
      reply_packets = e.packets;
      break;
    case Protocol::kUdp:
      break;
  }
  if (reply_packets == 0) return;

  PortState& server = host_port(e.dst_host);
  if (drops_.count(server.id) != 0) {
    // The server's own ingress is filtered; its replies die at its port.
    return;
  }
  const auto reply_bytes = static_cast<std::uint64_t>(std::llround(
      static_cast<double>(reply_packets) * e.response_packet_bytes));
  server.rx_packets += reply_packets;
  server.rx_bytes += reply_bytes;
  PortState& client = host_port(e.src_host);
  client.tx_packets += reply_packets;
  client.tx_bytes += reply_bytes;
  window_.packets_emitted += reply_packets;
  window_.packets_delivered += reply_packets;
  if (src_switch != dst_switch) {
    auto& up_src = port_state("s" + std::to_string(dst_switch) + "-eth" +
                              std::to_string(topology_.hosts_per_switch + 1));
    auto& up_dst = port_state("s" + std::to_string(src_switch) + "-eth" +
                              std::to_string(topology_.hosts_per_switch + 1));
    up_src.tx_packets += reply_packets;
    up_src.tx_bytes += reply_bytes;
    up_dst.rx_packets += reply_packets;
    up_dst.rx_bytes += reply_bytes;
  }
  if (forwarding_.insert({e.dst_host, e.src_host, proto}).second) {
    window_.packet_in_count += 1;
  }
}

void Fabric::advance(double dt_s) {
  if (!(dt_s > 0.0)) {
    throw std::invalid_argument("advance: dt_s must be positive");
  }
  const double window_start = now_s_;
  const double window_end = now_s_ + dt_s;

  // Phase 1: draw all traffic for the window. No draw depends on drop
  // state, so mitigated and unmitigated runs of one seed see the same
  // offered load and stay comparable packet for packet.
  std::vector<Emission> emissions;
  std::vector<int> all_servers;
  all_servers.insert(all_servers.end(), topology_.tcp_servers.begin(),
                     topology_.tcp_servers.end());
  all_servers.insert(all_servers.end(), topology_.udp_servers.begin(),
                     topology_.udp_servers.end());
  all_servers.insert(all_servers.end(), topology_.http_servers.begin(),
                     topology_.http_servers.end());

  for (int host = 1; host <= topology_.host_count(); ++host) {
    if (topology_.is_server(host)) continue;

    auto it = flows_.find(host);
    bool renew = it == flows_.end();
    if (!renew &&
        uniform_unit(rng_) < scenario_.benign.flow_renew_probability) {
      renew = true;
    }
    if (renew) {
      FlowState flow;
      const double pick = uniform_unit(rng_);
      if (pick < 0.5) {
        flow.proto = Protocol::kTcp;
        flow.server = topology_.tcp_servers[uniform_index(
            rng_, topology_.tcp_servers.size())];
      } else if (pick < 0.7) {
        flow.proto = Protocol::kUdp;
        flow.server = topology_.udp_servers[uniform_index(
            rng_, topology_.udp_servers.size())];
      } else if (pick < 0.9 && !topology_.http_servers.empty()) {
        flow.proto = Protocol::kHttp;
        flow.server = topology_.http_servers[uniform_index(
            rng_, topology_.http_servers.size())];
      } else {
        flow.proto = Protocol::kIcmp;
        flow.server = all_servers[uniform_index(rng_, all_servers.size())];
      }
      flow.pps = uniform_real(rng_, scenario_.benign.min_flow_pps,
                              scenario_.benign.max_flow_pps);
      flows_[host] = flow;
      it = flows_.find(host);
    }

    const FlowState& flow = it->second;
    const double jitter = uniform_real(rng_, 0.9, 1.1);
    const auto packets = static_cast<std::uint64_t>(
        std::llround(flow.pps * dt_s * jitter));

    Emission e;
    e.src_host = host;
    e.dst_host = flow.server;
    e.proto = flow.proto;
    e.packets = packets;
    switch (flow.proto) {
      case Protocol::kTcp:
        e.packet_bytes = uniform_real(rng_, kTcpMinBytes, kTcpMaxBytes);
        e.response_packet_bytes = kTcpAckBytes;
        break;
      case Protocol::kUdp:
        e.packet_bytes = uniform_real(rng_, kUdpMinBytes, kUdpMaxBytes);
        break;
      case Protocol::kHttp:
        e.packet_bytes = uniform_real(rng_, kHttpMinBytes, kHttpMaxBytes);
        e.response_packet_bytes =
            uniform_real(rng_, kHttpRespMinBytes, kHttpRespMaxBytes);
        break;
      case Protocol::kIcmp:
        e.packet_bytes = kIcmpBytes;
        e.response_packet_bytes = kIcmpBytes;
        break;
    }
    if (e.packets > 0) emissions.push_back(e);
  }

  for (const auto& phase : scenario_.attacks) {
    const double overlap = std::min(phase.end_s, window_end) -
                           std::max(phase.start_s, window_start);
    if (overlap <= 0.0) continue;
    const double per_attacker =
        phase.aggregate_pps / static_cast<double>(topology_.attackers.size());
    const double per_stream = per_attacker / 2.0;
    for (std::size_t a = 0; a < topology_.attackers.size(); ++a) {
      const int attacker = topology_.attackers[a];
      const int tcp_target =
          topology_.tcp_servers[a % topology_.tcp_servers.size()];
      const int udp_target =
          topology_.udp_servers[a % topology_.udp_servers.size()];
      for (const auto& [target, proto] :
           {std::pair{tcp_target, Protocol::kTcp},
            std::pair{udp_target, Protocol::kUdp}}) {
        const double jitter = uniform_real(rng_, 0.9, 1.1);
        const auto packets = static_cast<std::uint64_t>(
            std::llround(per_stream * overlap * jitter));
        if (packets == 0) continue;
        Emission e;
        e.src_host = attacker;
        e.dst_host = target;
        e.proto = proto;
        e.packets = packets;
        e.packet_bytes = uniform_real(rng_, scenario_.attack_min_packet_bytes,
                                      scenario_.attack_max_packet_bytes);
        e.attack = true;
        emissions.push_back(e);
      }
    }
  }

  // Phase 2: account everything against the current drop rules.
  window_ = WindowStats{};
  window_.start_s = window_start;
  window_.end_s = window_end;
  for (const auto& e : emissions) deliver(e);
  window_.controller_load_proxy =
      kLoadIdle +
      kLoadPerPacketIn * static_cast<double>(window_.packet_in_count) / dt_s;

  now_s_ = window_end;
}

FabricSnapshot Fabric::snapshot() const {
  FabricSnapshot snap;
  snap.now_s = now_s_;
  snap.ports.reserve(ports_.size());
  for (const auto& port : ports_) {
    snap.ports.push_back({port.id, now_s_, port.rx_packets, port.rx_bytes,
                          port.tx_packets, port.tx_bytes});
  }
  snap.dropped_ports.assign(drops_.begin(), drops_.end());
  snap.window = window_;
  return snap;
}

std::vector<ScenarioConfig> default_scenarios(std::uint64_t seed) {
  std::vector<ScenarioConfig> out;
  ScenarioConfig benign;
  benign.name = "benign";
  benign.duration_s = 300.0;
  benign.seed = fnv1a64(benign.name, seed);
  out.push_back(benign);

  const struct {
    const char* name;
    double pps;
  } intensities[] = {{"attack100k", 100000.0},
                     {"attack66k", 66666.0},
                     {"attack40k", 40000.0},
                     {"attack20k", 20000.0}};
  for (const auto& level : intensities) {
    ScenarioConfig sc;
    sc.name = level.name;
    sc.duration_s = 750.0;
    sc.attacks = {{120.0, 690.0, level.pps}};
    sc.seed = fnv1a64(sc.name, seed);
    out.push_back(sc);
  }
  return out;
}

namespace {

struct PoolEntry {
  TrafficSample sample;
  std::size_t scenario_idx = 0;
  std::size_t port_ordinal = 0;
};

bool pool_order(const PoolEntry& a, const PoolEntry& b) {
  return std::tie(a.scenario_idx, a.sample.meta.window, a.port_ordinal) <
         std::tie(b.scenario_idx, b.sample.meta.window, b.port_ordinal);
}

}  // namespace

std::vector<TrafficSample> generate_dataset(const DatasetSpec& spec) {
  if (!(spec.window_s > 0.0)) {
    throw std::invalid_argument("generate_dataset: window_s must be positive");
  }
  if (spec.scenarios.empty()) {
    throw std::invalid_argument("generate_dataset: no scenarios");
  }
  if (spec.target_records > 0 &&
      !(spec.attack_fraction > 0.0 && spec.attack_fraction < 1.0)) {
    throw std::invalid_argument(
        "generate_dataset: attack_fraction must be in (0, 1)");
  }

  std::vector<PoolEntry> benign_pool;
  std::vector<std::vector<PoolEntry>> attack_pools(spec.scenarios.size());

  for (std::size_t si = 0; si < spec.scenarios.size(); ++si) {
    const auto& sc = spec.scenarios[si];
    Fabric fabric(spec.topology, sc);
    std::map<std::string, InterfaceCounters> prev;
    for (const auto& port : fabric.host_ports()) {
      prev[port] = fabric.poll_counters(port);
    }
    const auto windows = static_cast<std::int64_t>(
        std::floor(sc.duration_s / spec.window_s + 1e-9));
    for (std::int64_t w = 0; w < windows; ++w) {
      const double t0 = fabric.now_s();
      fabric.advance(spec.window_s);
      const double t1 = fabric.now_s();
      for (std::size_t ordinal = 0; ordinal < fabric.host_ports().size();
           ++ordinal) {
        const auto& port = fabric.host_ports()[ordinal];
        const auto curr = fabric.poll_counters(port);
        PoolEntry entry;
        entry.scenario_idx = si;
        entry.port_ordinal = ordinal;
        entry.sample.features =
            compute_features(window_delta(prev[port], curr));
        entry.sample.label = fabric.port_attack_active(port, t0, t1) ? 1 : 0;
        entry.sample.meta.scenario = sc.name;
        entry.sample.meta.switch_id =
            (static_cast<int>(ordinal) / spec.topology.hosts_per_switch) + 1;
        entry.sample.meta.port = port;
        entry.sample.meta.window = w;
        entry.sample.meta.elapsed_s = spec.window_s;
        prev[port] = curr;
        if (entry.sample.label == 1) {
          attack_pools[si].push_back(std::move(entry));
        } else {
          benign_pool.push_back(std::move(entry));
        }
      }
    }
  }

  std::vector<PoolEntry> selected;
  if (spec.target_records == 0) {
    selected = std::move(benign_pool);
    for (auto& pool : attack_pools) {
      selected.insert(selected.end(), std::make_move_iterator(pool.begin()),
                      std::make_move_iterator(pool.end()));
    }
  } else {
    const auto attack_target = static_cast<std::size_t>(std::llround(
        static_cast<double>(spec.target_records) * spec.attack_fraction));
    const std::size_t benign_target = spec.target_records - attack_target;

    std::vector<std::size_t> attack_sources;
    for (std::size_t si = 0; si < attack_pools.size(); ++si) {
      if (!attack_pools[si].empty()) attack_sources.push_back(si);
    }
    if (attack_target > 0 && attack_sources.empty()) {
      throw std::runtime_error(
          "generate_dataset: attack records requested but no scenario "
          "produced attack windows");
    }
    if (benign_pool.size() < benign_target) {
      throw std::runtime_error(
          "generate_dataset: benign pool too small for the requested target");
    }

    std::mt19937_64 rng(spec.seed ^ 0xD5A61F2B3C4E5D6Full);
    shuffle_inplace(benign_pool, rng);
    selected.assign(std::make_move_iterator(benign_pool.begin()),
                    std::make_move_iterator(benign_pool.begin() +
                                            static_cast<std::ptrdiff_t>(
                                                benign_target)));

    // Spread the attack quota evenly over the scenarios that have attack
    // windows; earlier scenarios absorb the remainder.
    for (std::size_t rank = 0; rank < attack_sources.size(); ++rank) {
      std::size_t quota = attack_target / attack_sources.size();
      if (rank < attack_target % attack_sources.size()) ++quota;
      auto& pool = attack_pools[attack_sources[rank]];
      if (pool.size() < quota) {
        throw std::runtime_error(
            "generate_dataset: attack pool for scenario '" +
            spec.scenarios[attack_sources[rank]].name +
            "' is too small for its quota");
      }
      shuffle_inplace(pool, rng);
      selected.insert(selected.end(), std::make_move_iterator(pool.begin()),
                      std::make_move_iterator(
                          pool.begin() + static_cast<std::ptrdiff_t>(quota)));
    }
  }

  std::sort(selected.begin(), selected.end(), pool_order);
  std::vector<TrafficSample> out;
  out.reserve(selected.size());
  for (auto& entry : selected) out.push_back(std::move(entry.sample));
  return out;
}

}  // namespace ragmon
