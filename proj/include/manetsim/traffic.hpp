#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "manetsim/event_queue.hpp"
#include "manetsim/rng.hpp"

namespace manet {

enum class TrafficKind { CBR, VBR };

const char* to_string(TrafficKind kind);
TrafficKind traffic_kind_from_string(const std::string& name);

/// One application stream between two distinct nodes.
struct Flow {
    int flow_id = 0;
    int source = 0;
    int destination = 0;
    SimTime start = 0;
    SimTime stop = 0;
    TrafficKind kind = TrafficKind::CBR;

    void validate() const;
};

/// Application packet before it enters the network (no routing state yet).
struct AppPacket {
    int flow_id = 0;
    double bytes = 0;
    SimTime emitted_at = 0;      // H_t
    std::uint64_t frame_seq = 0; // source frame this packet belongs to
};

struct CbrConfig {
    double packet_bytes = 512.0;
    double rate_pps = 4.0;

    void validate() const;
    double interval() const { return 1.0 / rate_pps; }
};

enum class FrameType { I, P, B };
const char* to_string(FrameType type);

struct FrameLaw {
    double mu_log;  // lognormal mean of frame size, log-bytes
    double sigma;
};

struct VbrConfig {
    double initial_seed = 0.4;  // selects the sample path; same seed, same trace
    double rate_factor = 0.25;  // multiplicative scaling of every frame size
    double fps = 25.0;
    std::string gop_pattern = "IBBPBBPBBPBB";
    FrameLaw i_law{std::log(5000.0), 0.4};
    FrameLaw p_law{std::log(1800.0), 0.5};
    FrameLaw b_law{std::log(800.0), 0.6};
    double mtu_bytes = 1024.0;

    void validate() const;
};

/// MPEG-style frame-size generator. The whole frame sequence is a pure
/// function of (initial_seed, config): the rate factor rescales sizes while
/// the underlying sample path stays fixed.
class VbrState {
public:
    explicit VbrState(const VbrConfig& cfg);

    struct Frame {
        double bytes;
        FrameType type;
    };

    /// Next frame of the stream; the caller spaces frames 1/fps apart.
    Frame next_frame();

    std::uint64_t frames_emitted() const { return frame_counter_; }

private:
    const VbrConfig cfg_;
    RngStream rng_;
    std::size_t gop_pos_ = 0;
    std::uint64_t frame_counter_ = 0;
};

struct CbrEmission {
    AppPacket packet;
    SimTime next_at;
};

/// Emit the CBR packet due at `now`; next emission is exactly 1/rate later.
CbrEmission next_cbr(const CbrConfig& cfg, const Flow& flow, SimTime now);

/// Split one frame into MTU-sized packets, all stamped with the same
/// emission instant. Conserves bytes; count = ceil(size/mtu).
std::vector<AppPacket> fragment(double frame_bytes, double mtu, SimTime now, const Flow& flow,
                                std::uint64_t frame_seq);

/// Sample n_sources disjoint (source, destination) pairs without
/// replacement; requires n_sources <= n_nodes/2.
std::vector<Flow> build_flows(int n_nodes, int n_sources, RngStream& rng);

}  // namespace manet
