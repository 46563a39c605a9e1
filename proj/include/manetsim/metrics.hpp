#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "manetsim/event_queue.hpp"
#include "manetsim/link.hpp"

namespace manet {

/// Lifecycle of one data packet: emission instant, then exactly one of
/// reception instant, drop reason, or still-in-flight at the horizon.
struct PacketRecord {
    std::uint64_t packet_id = 0;
    int flow_id = 0;
    double bytes = 0;
    SimTime sent_at = 0;                    // H_t
    std::optional<SimTime> received_at;     // H_r
    std::optional<DropReason> drop_reason;
    std::uint64_t frame_seq = 0;
};

struct FlowStats {
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    double delay_sum = 0;
    double received_bytes = 0;
    std::uint64_t frames_sent = 0;      // distinct source frames
    std::uint64_t frames_delivered = 0; // frames with every fragment received
};

struct MetricsReport {
    std::optional<double> avg_delay;  // seconds; absent when nothing was received
    double throughput_bps = 0;
    std::optional<double> pdr;
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::uint64_t dropped = 0;
    std::uint64_t in_flight = 0;
    std::map<int, FlowStats> per_flow;
    std::map<DropReason, std::uint64_t> drop_histogram;
};

/// Per-run record of every data packet, feeding average end-to-end delay,
/// throughput and packet delivery ratio. Control traffic never enters here.
class MetricsLedger {
public:
    MetricsLedger() = default;
    MetricsLedger(SimTime window_start, SimTime window_end);

    void record_send(std::uint64_t packet_id, int flow_id, double bytes, SimTime h_t,
                     std::uint64_t frame_seq = 0);

    void record_received(std::uint64_t packet_id, SimTime h_r);
    void record_dropped(std::uint64_t packet_id, DropReason reason);

    std::uint64_t sent() const { return sent_; }
    std::uint64_t received() const { return received_; }
    std::uint64_t dropped() const { return dropped_; }
    std::uint64_t in_flight() const { return sent_ - received_ - dropped_; }

    /// Mean of (H_r - H_t) over received packets; absent when none received.
    std::optional<double> avg_delay() const;

    /// Received payload bits over the measurement window, bits/s.
    double measured_throughput() const;

    /// Received over sent data packets; sent must be positive.
    double pdr() const;

    MetricsReport report() const;

    /// CSV dump of every record: packet_id,flow_id,bytes,h_t,h_r,drop_reason
    std::string dump_csv() const;

    const std::map<std::uint64_t, PacketRecord>& records() const { return records_; }

private:
    SimTime window_start_ = 0;
    SimTime window_end_ = 0;
    std::map<std::uint64_t, PacketRecord> records_;
    std::map<std::pair<int, std::uint64_t>, std::pair<std::uint64_t, std::uint64_t>>
        frame_frags_;  // (flow, frame) -> (fragments sent, fragments received)
    std::uint64_t sent_ = 0;
    std::uint64_t received_ = 0;
    std::uint64_t dropped_ = 0;
    double delay_sum_ = 0;
    double received_bytes_ = 0;
};

}  // namespace manet
