#include "manetsim/simulation.hpp"

#include <chrono>
#include <cstring>
#include <sstream>
#include <variant>

namespace manet {

namespace {

struct NodePayload {
    int node;
};
struct FlowPayload {
    int flow_idx;
};
struct ArrivalPayload {
    int from;
    int to;
    std::variant<HelloMsg, TcMsg, DataPacket> content;
};

std::uint64_t mix_digest(std::uint64_t digest, std::uint64_t value) {
    digest ^= value + 0x9e3779b97f4a7c15ull + (digest << 6) + (digest >> 2);
    return digest;
}

std::uint64_t time_bits(SimTime t) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof t);
    std::memcpy(&bits, &t, sizeof bits);
    return bits;
}

constexpr double kSnapshotInterval = 1.0;
constexpr double kSpeedWindow = 100.0;

}  // namespace

std::string make_run_id(MobilityModel model, TrafficKind traffic, int n_nodes,
                        std::uint64_t seed) {
    std::ostringstream id;
    id << to_string(model) << "_" << to_string(traffic) << "_n" << n_nodes << "_s" << seed;
    return id.str();
}

Simulation::Simulation(const Scenario& scenario, std::uint64_t seed)
    : scenario_(scenario),
      link_rng_(seed, "link"),
      traffic_rng_(seed, "traffic"),
      ledger_(0, scenario.horizon) {
    scenario_.seed = seed;
    scenario_.resolve();
    scenario_.validate();
    mobile_ = true;
    tracks_.reserve(static_cast<std::size_t>(scenario_.n_nodes));
    for (int i = 0; i < scenario_.n_nodes; ++i) {
        mobility_rng_.push_back(mobility_node_stream(seed, i));
        tracks_.push_back(init_track(mobility_rng_.back(), scenario_.area, scenario_.mobility, i));
    }
    init_common(seed, std::nullopt);
    for (int i = 0; i < scenario_.n_nodes; ++i)
        queue_.schedule(tracks_[static_cast<std::size_t>(i)].leg.arrive_at,
                        EventKind::WaypointReached, NodePayload{i});
}

Simulation::Simulation(const Scenario& scenario, std::uint64_t seed,
                       std::vector<Vec2> fixed_positions,
                       std::optional<std::vector<Flow>> custom_flows)
    : scenario_(scenario),
      link_rng_(seed, "link"),
      traffic_rng_(seed, "traffic"),
      ledger_(0, scenario.horizon) {
    scenario_.seed = seed;
    scenario_.n_nodes = static_cast<int>(fixed_positions.size());
    scenario_.resolve();
    scenario_.validate();
    mobile_ = false;
    fixed_positions_ = std::move(fixed_positions);
    init_common(seed, custom_flows);
}

void Simulation::init_common(std::uint64_t seed,
                             const std::optional<std::vector<Flow>>& custom_flows) {
    const RngStream root(seed, "run");
    const RngStream protocol_root = root.fork("olsr");
    link_rng_ = root.fork("link");
    traffic_rng_ = root.fork("traffic");

    states_.reserve(static_cast<std::size_t>(scenario_.n_nodes));
    transmitters_.reserve(static_cast<std::size_t>(scenario_.n_nodes));
    for (int i = 0; i < scenario_.n_nodes; ++i) {
        protocol_rng_.push_back(protocol_root.fork("n" + std::to_string(i)));
        states_.emplace_back(i, scenario_.olsr);
        transmitters_.emplace_back(scenario_.link.queue_len);
    }

    // protocol timers start at a uniform phase inside their first period
    for (int i = 0; i < scenario_.n_nodes; ++i) {
        auto& rng = protocol_rng_[static_cast<std::size_t>(i)];
        queue_.schedule(rng.uniform(0.0, scenario_.olsr.hello_interval), EventKind::EmitHello,
                        NodePayload{i});
        queue_.schedule(rng.uniform(0.0, scenario_.olsr.tc_interval), EventKind::EmitTc,
                        NodePayload{i});
    }

    // application flows, staggered so routing can converge first
    std::vector<Flow> pairs;
    if (custom_flows) {
        pairs = *custom_flows;
    } else {
        pairs = build_flows(scenario_.n_nodes, scenario_.n_sources, traffic_rng_);
        for (auto& f : pairs) {
            f.kind = scenario_.traffic;
            f.start = traffic_rng_.uniform(10.0, 20.0);
            f.stop = scenario_.horizon;
            if (f.start >= f.stop) f.start = scenario_.horizon * 0.5;
        }
    }
    for (const auto& base : pairs) {
        FlowRuntime rt;
        rt.flow = base;
        rt.flow.validate();
        if (rt.flow.kind == TrafficKind::VBR) rt.vbr.emplace(scenario_.vbr);
        flows_rt_.push_back(std::move(rt));
        flows_.push_back(flows_rt_.back().flow);
        queue_.schedule(flows_rt_.back().flow.start, EventKind::TrafficEmit,
                        FlowPayload{static_cast<int>(flows_rt_.size()) - 1});
    }

    queue_.schedule(0.0, EventKind::MetricsSnapshot, std::any{});
}

Vec2 Simulation::node_position(int node, SimTime t) const {
    if (!mobile_) return fixed_positions_[static_cast<std::size_t>(node)];
    return track_position(tracks_[static_cast<std::size_t>(node)], t);
}

double Simulation::jittered(double interval, RngStream& rng) const {
    return interval + rng.uniform(-scenario_.olsr.jitter, scenario_.olsr.jitter);
}

void Simulation::run() { run_until(scenario_.horizon); }

void Simulation::run_until(SimTime limit) {
    queue_.run_until(limit, [this](const Event& ev) { dispatch(ev); });
}

void Simulation::dispatch(const Event& ev) {
    extras_.event_digest = mix_digest(extras_.event_digest,
                                      time_bits(ev.fire_at) ^ (static_cast<std::uint64_t>(ev.kind) << 56));
    switch (ev.kind) {
        case EventKind::WaypointReached:
            on_waypoint(std::any_cast<NodePayload>(ev.payload).node, ev.fire_at);
            break;
        case EventKind::EmitHello:
            on_hello_timer(std::any_cast<NodePayload>(ev.payload).node, ev.fire_at);
            break;
        case EventKind::EmitTc:
            on_tc_timer(std::any_cast<NodePayload>(ev.payload).node, ev.fire_at);
            break;
        case EventKind::TrafficEmit:
            on_traffic(std::any_cast<FlowPayload>(ev.payload).flow_idx, ev.fire_at);
            break;
        case EventKind::PacketArrival: {
            const auto& arrival = std::any_cast<const ArrivalPayload&>(ev.payload);
            if (std::holds_alternative<HelloMsg>(arrival.content)) {
                states_[static_cast<std::size_t>(arrival.to)].process_hello(
                    std::get<HelloMsg>(arrival.content), ev.fire_at);
            } else if (std::holds_alternative<TcMsg>(arrival.content)) {
                const TcMsg& tc = std::get<TcMsg>(arrival.content);
                auto& state = states_[static_cast<std::size_t>(arrival.to)];
                state.process_tc(tc, ev.fire_at);
                if (tc_sniffer) tc_sniffer(tc, arrival.from, arrival.to, ev.fire_at);
                if (state.forward_flooded(tc, arrival.from, ev.fire_at) && tc.ttl > 1) {
                    TcMsg relayed = tc;
                    --relayed.ttl;
                    ++relayed.hop_count;
                    broadcast_control(arrival.to, tc_bytes(relayed), nullptr, &relayed, ev.fire_at);
                }
            } else {
                handle_data_arrival(arrival.to, std::get<DataPacket>(arrival.content), ev.fire_at);
            }
            break;
        }
        case EventKind::MetricsSnapshot:
            on_snapshot(ev.fire_at);
            break;
    }
}

void Simulation::on_waypoint(int node, SimTime now) {
    auto& track = tracks_[static_cast<std::size_t>(node)];
    const SimTime next = advance(track, mobility_rng_[static_cast<std::size_t>(node)],
                                 scenario_.area, scenario_.mobility, now);
    if (next <= scenario_.horizon)
        queue_.schedule(next, EventKind::WaypointReached, NodePayload{node});
}

void Simulation::on_hello_timer(int node, SimTime now) {
    auto& rng = protocol_rng_[static_cast<std::size_t>(node)];
    const HelloMsg msg = states_[static_cast<std::size_t>(node)].emit_hello(now);
    broadcast_control(node, hello_bytes(msg), &msg, nullptr, now);
    queue_.schedule(now + jittered(scenario_.olsr.hello_interval, rng), EventKind::EmitHello,
                    NodePayload{node});
}

void Simulation::on_tc_timer(int node, SimTime now) {
    auto& rng = protocol_rng_[static_cast<std::size_t>(node)];
    const auto msg = states_[static_cast<std::size_t>(node)].emit_tc(now);
    if (msg) {
        TcMsg tc = *msg;
        tc.ttl = scenario_.n_nodes + 16;  // flood bound; relays decrement
        broadcast_control(node, tc_bytes(tc), nullptr, &tc, now);
    }
    queue_.schedule(now + jittered(scenario_.olsr.tc_interval, rng), EventKind::EmitTc,
                    NodePayload{node});
}

void Simulation::broadcast_control(int node, double bytes, const HelloMsg* hello,
                                   const TcMsg* tc, SimTime now) {
    ++extras_.control_messages_sent;
    const double air = scenario_.link.air_time(bytes);
    const auto start = transmitters_[static_cast<std::size_t>(node)].enqueue(now, air, true);
    if (!start) {
        ++extras_.control_drops;
        return;
    }
    Transmission tx;
    tx.sender = node;
    tx.payload_bytes = bytes;
    tx.start = *start;
    tx.air_time = air;
    const auto result = transmit(
        tx, link_rng_, [this, now](int i) { return node_position(i, now); }, scenario_.n_nodes,
        scenario_.link);
    for (const auto& d : result.deliveries) {
        ++extras_.control_deliveries;
        ArrivalPayload payload{node, d.receiver, {}};
        if (hello) payload.content = *hello;
        else payload.content = *tc;
        queue_.schedule(d.at, EventKind::PacketArrival, std::move(payload));
    }
    extras_.control_drops += result.drops.size();
}

void Simulation::on_traffic(int flow_idx, SimTime now) {
    auto& rt = flows_rt_[static_cast<std::size_t>(flow_idx)];
    if (now >= rt.flow.stop) return;

    if (rt.flow.kind == TrafficKind::CBR) {
        const auto emission = next_cbr(scenario_.cbr, rt.flow, now);
        DataPacket pkt;
        pkt.packet_id = next_packet_id_++;
        pkt.flow_id = rt.flow.flow_id;
        pkt.source = rt.flow.source;
        pkt.destination = rt.flow.destination;
        pkt.bytes = emission.packet.bytes;
        pkt.emitted_at = now;
        pkt.ttl = scenario_.ttl;
        pkt.frame_seq = rt.next_frame_seq++;
        ledger_.record_send(pkt.packet_id, pkt.flow_id, pkt.bytes, now, pkt.frame_seq);
        send_data(rt.flow.source, pkt, now);
        if (emission.next_at < rt.flow.stop)
            queue_.schedule(emission.next_at, EventKind::TrafficEmit, FlowPayload{flow_idx});
    } else {
        const auto frame = rt.vbr->next_frame();
        const auto frame_seq = rt.next_frame_seq++;
        for (const auto& app :
             fragment(frame.bytes, scenario_.vbr.mtu_bytes, now, rt.flow, frame_seq)) {
            DataPacket pkt;
            pkt.packet_id = next_packet_id_++;
            pkt.flow_id = rt.flow.flow_id;
            pkt.source = rt.flow.source;
            pkt.destination = rt.flow.destination;
            pkt.bytes = app.bytes;
            pkt.emitted_at = now;
            pkt.ttl = scenario_.ttl;
            pkt.frame_seq = frame_seq;
            ledger_.record_send(pkt.packet_id, pkt.flow_id, pkt.bytes, now, frame_seq);
            send_data(rt.flow.source, pkt, now);
        }
        const SimTime next_at = now + 1.0 / scenario_.vbr.fps;
        if (next_at < rt.flow.stop)
            queue_.schedule(next_at, EventKind::TrafficEmit, FlowPayload{flow_idx});
    }
}

void Simulation::send_data(int node, const DataPacket& packet, SimTime now) {
    const auto next_hop =
        states_[static_cast<std::size_t>(node)].route_data(packet.destination, now);
    if (!next_hop) {
        ledger_.record_dropped(packet.packet_id, DropReason::NoRoute);
        return;
    }
    const double air = scenario_.link.air_time(packet.bytes);
    const auto start = transmitters_[static_cast<std::size_t>(node)].enqueue(now, air);
    if (!start) {
        ledger_.record_dropped(packet.packet_id, DropReason::QueueFull);
        return;
    }
    Transmission tx;
    tx.sender = node;
    tx.receiver = *next_hop;
    tx.payload_bytes = packet.bytes;
    tx.start = *start;
    tx.air_time = air;
    const auto result = transmit(
        tx, link_rng_, [this, now](int i) { return node_position(i, now); }, scenario_.n_nodes,
        scenario_.link);
    for (const auto& d : result.deliveries)
        queue_.schedule(d.at, EventKind::PacketArrival, ArrivalPayload{node, d.receiver, packet});
    for (const auto& d : result.drops) ledger_.record_dropped(packet.packet_id, d.reason);
}

void Simulation::handle_data_arrival(int node, DataPacket packet, SimTime now) {
    if (packet.destination == node) {
        ledger_.record_received(packet.packet_id, now);
        return;
    }
    --packet.ttl;
    if (packet.ttl <= 0) {
        ledger_.record_dropped(packet.packet_id, DropReason::TtlExpired);
        return;
    }
    send_data(node, packet, now);
}

void Simulation::on_snapshot(SimTime now) {
    if (mobile_) {
        double sum = 0;
        for (const auto& track : tracks_) sum += track_speed(track, now);
        const double mean = sum / static_cast<double>(scenario_.n_nodes);
        if (now <= kSpeedWindow) {
            speed_sum_early_ += mean;
            ++speed_n_early_;
        }
        if (now >= scenario_.horizon - kSpeedWindow) {
            speed_sum_late_ += mean;
            ++speed_n_late_;
        }
    }
    if (now + kSnapshotInterval <= scenario_.horizon)
        queue_.schedule(now + kSnapshotInterval, EventKind::MetricsSnapshot, std::any{});
    if (speed_n_early_) extras_.mean_speed_early = speed_sum_early_ / speed_n_early_;
    if (speed_n_late_) extras_.mean_speed_late = speed_sum_late_ / speed_n_late_;
}

RunResult run_scenario(const Scenario& scenario, std::uint64_t seed) {
    RunResult result;
    result.seed = seed;
    result.model = scenario.mobility.model;
    result.traffic = scenario.traffic;
    result.n_nodes = scenario.n_nodes;
    result.n_sources = scenario.n_sources;
    result.run_id = make_run_id(scenario.mobility.model, scenario.traffic, scenario.n_nodes, seed);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        Scenario sc = scenario;
        sc.seed = seed;
        result.fingerprint = sc.fingerprint();
        Simulation sim(sc, seed);
        sim.run();
        result.report = sim.ledger().report();
        result.extras = sim.extras();
        result.n_sources = sim.scenario().n_sources;
    } catch (const std::exception& e) {
        result.status = std::string("failed: ") + e.what();
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace manet
