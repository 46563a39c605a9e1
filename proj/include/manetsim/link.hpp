#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "manetsim/event_queue.hpp"
#include "manetsim/geom.hpp"
#include "manetsim/rng.hpp"

namespace manet {

enum class SuccessCurve { Step, Exponential };

const char* to_string(SuccessCurve curve);
SuccessCurve success_curve_from_string(const std::string& name);

/// Abstract wireless link: unit-disk connectivity, serialized air time,
/// and a distance-driven packet success probability.
struct LinkModel {
    double tx_range = 250.0;       // meters
    double bitrate = 2e6;          // bits/s
    double header_bytes = 58.0;    // per-packet overhead C
    double snr_ref = 250.0;        // gamma(d) = (snr_ref/d)^2
    SuccessCurve curve = SuccessCurve::Step;
    double step_threshold = 1.0;   // step curve: success iff gamma >= threshold
    double exp_k = 1.0;            // exponential curve: 1 - exp(-k*gamma)
    std::size_t queue_len = 50;    // per-node FIFO bound, tail-drop

    void validate() const;

    double air_time(double payload_bytes) const {
        return (payload_bytes + header_bytes) * 8.0 / bitrate;
    }
};

/// SNR ratio as a function of sender-receiver distance, clamped near d = 0.
double snr_at_distance(double d, const LinkModel& model);

/// Probability of receiving a packet correctly, monotone in gamma.
double packet_success(double gamma, const LinkModel& model);

/// Payload transmission rate (L - C)/L * R * f(gamma), bits/s.
/// L is the on-air packet size in bytes, C the header share of it.
double effective_throughput(double L, double C, double R, double gamma, const LinkModel& model);

/// Symmetric adjacency over node positions: edge iff distance <= tx_range
/// (inclusive), no self-edges.
std::vector<std::vector<bool>> connectivity(const std::vector<Vec2>& positions,
                                            const LinkModel& model);

enum class DropReason { OutOfRange, ChannelLoss, QueueFull, NoRoute, TtlExpired };
const char* to_string(DropReason reason);

struct Transmission {
    int sender = 0;
    std::optional<int> receiver;  // nullopt = broadcast
    double payload_bytes = 0;
    SimTime start = 0;
    double air_time = 0;
};

struct Delivery {
    int receiver;
    SimTime at;
};

struct Drop {
    int receiver;
    DropReason reason;
};

struct TransmitResult {
    std::vector<Delivery> deliveries;
    std::vector<Drop> drops;
};

/// Resolve one transmission against the current positions: per intended
/// receiver exactly one delivery or drop. Broadcast addresses every node in
/// range of the sender with an independent success decision.
TransmitResult transmit(const Transmission& tx, RngStream& rng,
                        const std::vector<Vec2>& positions, const LinkModel& model);

/// Same semantics with positions supplied lazily; unicast resolution then
/// touches only the two endpoints.
using PositionFn = std::function<Vec2(int)>;
TransmitResult transmit(const Transmission& tx, RngStream& rng, const PositionFn& position_of,
                        int n_nodes, const LinkModel& model);

/// Per-node transmit FIFO. Start times are assigned at enqueue: the
/// transmitter serializes packets back to back and tail-drops when more than
/// queue_len transmissions are waiting to start. Routing-control packets
/// bypass the bound (the priority queueing of the reference simulator), so
/// saturating data cannot starve the protocol.
class Transmitter {
public:
    explicit Transmitter(std::size_t queue_len = 50) : cap_(queue_len) {}

    /// Returns the assigned start time, or nullopt if the queue is full.
    std::optional<SimTime> enqueue(SimTime now, double air_time, bool priority = false);

    SimTime busy_until() const { return busy_until_; }

private:
    std::size_t cap_;
    SimTime busy_until_ = 0;
    std::vector<SimTime> waiting_;  // start times not yet reached
};

}  // namespace manet
