#include "manetsim/metrics.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace manet {

MetricsLedger::MetricsLedger(SimTime window_start, SimTime window_end)
    : window_start_(window_start), window_end_(window_end) {
    if (!(window_end > window_start))
        throw std::invalid_argument("metrics window must have positive length");
}

void MetricsLedger::record_send(std::uint64_t packet_id, int flow_id, double bytes, SimTime h_t,
                                std::uint64_t frame_seq) {
    if (records_.count(packet_id))
        throw std::invalid_argument("duplicate packet id " + std::to_string(packet_id));
    PacketRecord rec;
    rec.packet_id = packet_id;
    rec.flow_id = flow_id;
    rec.bytes = bytes;
    rec.sent_at = h_t;
    rec.frame_seq = frame_seq;
    records_.emplace(packet_id, rec);
    ++sent_;
    ++frame_frags_[{flow_id, frame_seq}].first;
}

void MetricsLedger::record_received(std::uint64_t packet_id, SimTime h_r) {
    auto it = records_.find(packet_id);
    if (it == records_.end())
        throw std::invalid_argument("reception for unknown packet id " + std::to_string(packet_id));
    PacketRecord& rec = it->second;
    if (rec.received_at) return;  // duplicate copy from the network; first one counts
    if (rec.drop_reason)
        throw std::logic_error("packet " + std::to_string(packet_id) + " already dropped");
    if (h_r < rec.sent_at) throw std::invalid_argument("reception precedes emission");
    rec.received_at = h_r;
    ++received_;
    delay_sum_ += h_r - rec.sent_at;
    received_bytes_ += rec.bytes;
    ++frame_frags_[{rec.flow_id, rec.frame_seq}].second;
}

void MetricsLedger::record_dropped(std::uint64_t packet_id, DropReason reason) {
    auto it = records_.find(packet_id);
    if (it == records_.end())
        throw std::invalid_argument("drop for unknown packet id " + std::to_string(packet_id));
    PacketRecord& rec = it->second;
    if (rec.received_at || rec.drop_reason)
        throw std::logic_error("packet " + std::to_string(packet_id) + " already has an outcome");
    rec.drop_reason = reason;
    ++dropped_;
}

std::optional<double> MetricsLedger::avg_delay() const {
    if (received_ == 0) return std::nullopt;
    return delay_sum_ / static_cast<double>(received_);
}

double MetricsLedger::measured_throughput() const {
    if (!(window_end_ > window_start_))
        throw std::logic_error("measurement window not configured");
    return received_bytes_ * 8.0 / (window_end_ - window_start_);
}

double MetricsLedger::pdr() const {
    if (sent_ == 0) throw std::logic_error("pdr undefined: no packets sent");
    return static_cast<double>(received_) / static_cast<double>(sent_);
}

MetricsReport MetricsLedger::report() const {
    MetricsReport rep;
    rep.avg_delay = avg_delay();
    rep.throughput_bps = window_end_ > window_start_ ? measured_throughput() : 0.0;
    rep.pdr = sent_ > 0 ? std::optional<double>(pdr()) : std::nullopt;
    rep.sent = sent_;
    rep.received = received_;
    rep.dropped = dropped_;
    rep.in_flight = in_flight();
    for (const auto& [id, rec] : records_) {
        FlowStats& fs = rep.per_flow[rec.flow_id];
        ++fs.sent;
        if (rec.received_at) {
            ++fs.received;
            fs.delay_sum += *rec.received_at - rec.sent_at;
            fs.received_bytes += rec.bytes;
        }
        if (rec.drop_reason) ++rep.drop_histogram[*rec.drop_reason];
    }
    for (const auto& [key, counts] : frame_frags_) {
        FlowStats& fs = rep.per_flow[key.first];
        ++fs.frames_sent;
        if (counts.second == counts.first) ++fs.frames_delivered;
    }
    return rep;
}

std::string MetricsLedger::dump_csv() const {
    std::ostringstream out;
    out << "packet_id,flow_id,bytes,h_t,h_r,drop_reason\n";
    char buf[64];
    for (const auto& [id, rec] : records_) {
        out << id << ',' << rec.flow_id << ',';
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,", rec.bytes, rec.sent_at);
        out << buf;
        if (rec.received_at) {
            std::snprintf(buf, sizeof buf, "%.9g", *rec.received_at);
            out << buf;
        }
        out << ',';
        if (rec.drop_reason) out << to_string(*rec.drop_reason);
        out << '\n';
    }
    return out.str();
}

}  // namespace manet
