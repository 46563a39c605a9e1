#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "manetsim/event_queue.hpp"
#include "manetsim/metrics.hpp"
#include "manetsim/mobility.hpp"
#include "manetsim/olsr.hpp"
#include "manetsim/scenario.hpp"
#include "manetsim/traffic.hpp"

namespace manet {

/// Data packet as it travels the network.
struct DataPacket {
    std::uint64_t packet_id = 0;
    int flow_id = 0;
    int source = 0;
    int destination = 0;
    double bytes = 0;
    SimTime emitted_at = 0;
    int ttl = 0;
    std::uint64_t frame_seq = 0;
};

struct RunExtras {
    std::uint64_t event_digest = 0;  // rolling hash of the processed event stream
    double mean_speed_early = 0;     // probe window [0, 100]
    double mean_speed_late = 0;      // probe window [horizon-100, horizon]
    std::uint64_t control_messages_sent = 0;
    std::uint64_t control_deliveries = 0;
    std::uint64_t control_drops = 0;
};

struct RunResult {
    std::string run_id;
    std::uint64_t fingerprint = 0;
    std::uint64_t seed = 0;
    MobilityModel model = MobilityModel::RWP;
    TrafficKind traffic = TrafficKind::CBR;
    int n_nodes = 0;
    int n_sources = 0;
    MetricsReport report;
    RunExtras extras;
    double wall_seconds = 0;
    std::string status = "ok";  // "ok" or the error text
};

/// One deterministic simulation run: mobility, link, routing, traffic and
/// metrics wired through a single event queue. Runs share no state and may
/// execute on different threads concurrently.
class Simulation {
public:
    /// Nodes move per the scenario's mobility model.
    Simulation(const Scenario& scenario, std::uint64_t seed);

    /// Nodes pinned at the given positions (protocol studies on a fixed
    /// topology); the scenario's mobility section is ignored. When
    /// `custom_flows` is given it replaces the sampled flow set.
    Simulation(const Scenario& scenario, std::uint64_t seed, std::vector<Vec2> fixed_positions,
               std::optional<std::vector<Flow>> custom_flows = std::nullopt);

    /// Process events up to the scenario horizon.
    void run();

    /// Process events up to `limit` only (stepwise inspection).
    void run_until(SimTime limit);

    SimTime now() const { return queue_.now(); }
    const Scenario& scenario() const { return scenario_; }
    const MetricsLedger& ledger() const { return ledger_; }
    const OlsrState& olsr_state(int node) const { return states_.at(static_cast<std::size_t>(node)); }
    OlsrState& olsr_state(int node) { return states_.at(static_cast<std::size_t>(node)); }
    const std::vector<Flow>& flows() const { return flows_; }
    Vec2 node_position(int node, SimTime t) const;
    const RunExtras& extras() const { return extras_; }

    /// Test hook: observes every delivered topology-control message.
    std::function<void(const TcMsg&, int from, int to, SimTime at)> tc_sniffer;

private:
    struct FlowRuntime {
        Flow flow;
        std::optional<VbrState> vbr;
        std::uint64_t next_frame_seq = 0;
    };

    void init_common(std::uint64_t seed, const std::optional<std::vector<Flow>>& custom_flows);
    void dispatch(const Event& ev);
    void on_waypoint(int node, SimTime now);
    void on_hello_timer(int node, SimTime now);
    void on_tc_timer(int node, SimTime now);
    void on_traffic(int flow_idx, SimTime now);
    void on_snapshot(SimTime now);
    void handle_data_arrival(int node, DataPacket packet, SimTime now);
    void send_data(int node, const DataPacket& packet, SimTime now);
    void broadcast_control(int node, double bytes, const HelloMsg* hello, const TcMsg* tc,
                           SimTime now);
    double jittered(double interval, RngStream& rng) const;

    Scenario scenario_;
    EventQueue queue_;
    bool mobile_ = true;
    std::vector<NodeTrack> tracks_;
    std::vector<Vec2> fixed_positions_;
    std::vector<OlsrState> states_;
    std::vector<Transmitter> transmitters_;
    std::vector<RngStream> mobility_rng_;
    std::vector<RngStream> protocol_rng_;
    RngStream link_rng_;
    RngStream traffic_rng_;
    MetricsLedger ledger_;
    std::vector<FlowRuntime> flows_rt_;
    std::vector<Flow> flows_;
    std::uint64_t next_packet_id_ = 0;
    RunExtras extras_;
    double speed_sum_early_ = 0, speed_sum_late_ = 0;
    std::uint64_t speed_n_early_ = 0, speed_n_late_ = 0;
};

/// Run one scenario to completion and summarize it.
RunResult run_scenario(const Scenario& scenario, std::uint64_t seed);

std::string make_run_id(MobilityModel model, TrafficKind traffic, int n_nodes,
                        std::uint64_t seed);

}  // namespace manet
