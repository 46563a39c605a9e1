#include "manetsim/traffic.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace manet {

const char* to_string(TrafficKind kind) { return kind == TrafficKind::CBR ? "cbr" : "vbr"; }

TrafficKind traffic_kind_from_string(const std::string& name) {
    if (name == "cbr") return TrafficKind::CBR;
    if (name == "vbr") return TrafficKind::VBR;
    throw std::invalid_argument("unknown traffic kind '" + name + "' (cbr|vbr)");
}

const char* to_string(FrameType type) {
    switch (type) {
        case FrameType::I: return "I";
        case FrameType::P: return "P";
        case FrameType::B: return "B";
    }
    return "?";
}

void Flow::validate() const {
    if (source == destination) throw std::invalid_argument("flow source equals destination");
    if (!(start < stop)) throw std::invalid_argument("flow start must precede stop");
}

void CbrConfig::validate() const {
    if (!(packet_bytes > 0)) throw std::invalid_argument("cbr_size_bytes must be > 0");
    if (!(rate_pps > 0)) throw std::invalid_argument("cbr_rate_pps must be > 0");
}

void VbrConfig::validate() const {
    if (!(rate_factor > 0)) throw std::invalid_argument("vbr_rate_factor must be > 0");
    if (!(fps > 0)) throw std::invalid_argument("vbr_fps must be > 0");
    if (gop_pattern.empty() || gop_pattern.front() != 'I')
        throw std::invalid_argument("vbr_gop must be non-empty and start with I");
    for (char c : gop_pattern)
        if (c != 'I' && c != 'P' && c != 'B')
            throw std::invalid_argument("vbr_gop may contain only I, P, B");
    if (!(mtu_bytes > 0)) throw std::invalid_argument("mtu_bytes must be > 0");
}

VbrState::VbrState(const VbrConfig& cfg)
    : cfg_(cfg), rng_(std::bit_cast<std::uint64_t>(cfg.initial_seed), "vbr") {
    cfg_.validate();
}

VbrState::Frame VbrState::next_frame() {
    const char type_char = cfg_.gop_pattern[gop_pos_];
    gop_pos_ = (gop_pos_ + 1) % cfg_.gop_pattern.size();
    ++frame_counter_;

    FrameType type = FrameType::I;
    const FrameLaw* law = &cfg_.i_law;
    if (type_char == 'P') {
        type = FrameType::P;
        law = &cfg_.p_law;
    } else if (type_char == 'B') {
        type = FrameType::B;
        law = &cfg_.b_law;
    }
    const double raw = rng_.lognormal(law->mu_log, law->sigma);
    const double bytes = std::max(1.0, std::round(cfg_.rate_factor * raw));
    return {bytes, type};
}

CbrEmission next_cbr(const CbrConfig& cfg, const Flow& flow, SimTime now) {
    cfg.validate();
    if (now < flow.start || now >= flow.stop)
        throw std::invalid_argument("cbr emission outside the flow's active interval");
    CbrEmission out;
    out.packet.flow_id = flow.flow_id;
    out.packet.bytes = cfg.packet_bytes;
    out.packet.emitted_at = now;
    out.next_at = now + cfg.interval();
    return out;
}

std::vector<AppPacket> fragment(double frame_bytes, double mtu, SimTime now, const Flow& flow,
                                std::uint64_t frame_seq) {
    if (!(mtu > 0)) throw std::invalid_argument("mtu must be > 0");
    if (!(frame_bytes > 0)) throw std::invalid_argument("frame size must be > 0");
    std::vector<AppPacket> packets;
    double remaining = frame_bytes;
    while (remaining > 0) {
        AppPacket p;
        p.flow_id = flow.flow_id;
        p.bytes = std::min(remaining, mtu);
        p.emitted_at = now;
        p.frame_seq = frame_seq;
        packets.push_back(p);
        remaining -= p.bytes;
    }
    return packets;
}

std::vector<Flow> build_flows(int n_nodes, int n_sources, RngStream& rng) {
    if (n_sources < 0) throw std::invalid_argument("n_sources must be >= 0");
    if (2 * n_sources > n_nodes)
        throw std::invalid_argument("n_sources exceeds n_nodes/2; pairs must be disjoint");
    std::vector<int> ids(n_nodes);
    for (int i = 0; i < n_nodes; ++i) ids[i] = i;
    // partial Fisher-Yates: first 2*n_sources entries are the draw
    for (int i = 0; i < 2 * n_sources; ++i) {
        const auto j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n_nodes - i)));
        std::swap(ids[i], ids[j]);
    }
    std::vector<Flow> flows;
    flows.reserve(static_cast<std::size_t>(n_sources));
    for (int k = 0; k < n_sources; ++k) {
        Flow f;
        f.flow_id = k;
        f.source = ids[2 * k];
        f.destination = ids[2 * k + 1];
        flows.push_back(f);
    }
    return flows;
}

}  // namespace manet
