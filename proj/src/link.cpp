#include "manetsim/link.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manet {

const char* to_string(SuccessCurve curve) {
    return curve == SuccessCurve::Step ? "step" : "exponential";
}

SuccessCurve success_curve_from_string(const std::string& name) {
    if (name == "step") return SuccessCurve::Step;
    if (name == "exponential") return SuccessCurve::Exponential;
    throw std::invalid_argument("unknown success curve '" + name + "' (step|exponential)");
}

const char* to_string(DropReason reason) {
    switch (reason) {
        case DropReason::OutOfRange: return "out-of-range";
        case DropReason::ChannelLoss: return "channel-loss";
        case DropReason::QueueFull: return "queue-full";
        case DropReason::NoRoute: return "no-route";
        case DropReason::TtlExpired: return "ttl-expired";
    }
    return "unknown";
}

void LinkModel::validate() const {
    if (!(tx_range > 0)) throw std::invalid_argument("tx_range_m must be > 0");
    if (!(bitrate > 0)) throw std::invalid_argument("bitrate_bps must be > 0");
    if (header_bytes < 0) throw std::invalid_argument("header_bytes must be >= 0");
    if (!(snr_ref > 0)) throw std::invalid_argument("snr_ref_m must be > 0");
    if (!(step_threshold > 0)) throw std::invalid_argument("success_threshold must be > 0");
    if (!(exp_k > 0)) throw std::invalid_argument("success_k must be > 0");
}

double snr_at_distance(double d, const LinkModel& model) {
    constexpr double kMinDistance = 1e-3;
    const double clamped = std::max(d, kMinDistance);
    const double ratio = model.snr_ref / clamped;
    return ratio * ratio;
}

double packet_success(double gamma, const LinkModel& model) {
    if (gamma < 0) throw std::invalid_argument("gamma must be >= 0");
    if (gamma == 0) return 0.0;
    if (model.curve == SuccessCurve::Step) return gamma >= model.step_threshold ? 1.0 : 0.0;
    return 1.0 - std::exp(-model.exp_k * gamma);
}

double effective_throughput(double L, double C, double R, double gamma, const LinkModel& model) {
    if (!(L > C)) throw std::invalid_argument("packet size L must exceed overhead C");
    return (L - C) / L * R * packet_success(gamma, model);
}

std::vector<std::vector<bool>> connectivity(const std::vector<Vec2>& positions,
                                            const LinkModel& model) {
    const std::size_t n = positions.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distance(positions[i], positions[j]) <= model.tx_range) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    return adj;
}

namespace {

bool channel_success(double gamma, const LinkModel& model, RngStream& rng) {
    const double p = packet_success(gamma, model);
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return rng.bernoulli(p);
}

}  // namespace

TransmitResult transmit(const Transmission& tx, RngStream& rng,
                        const std::vector<Vec2>& positions, const LinkModel& model) {
    return transmit(
        tx, rng, [&positions](int i) { return positions[static_cast<std::size_t>(i)]; },
        static_cast<int>(positions.size()), model);
}

TransmitResult transmit(const Transmission& tx, RngStream& rng, const PositionFn& position_of,
                        int n_nodes, const LinkModel& model) {
    if (tx.sender < 0 || tx.sender >= n_nodes)
        throw std::invalid_argument("transmit: unknown sender");
    TransmitResult result;
    const Vec2 from = position_of(tx.sender);
    const SimTime delivered_at = tx.start + tx.air_time;

    auto resolve = [&](int receiver) {
        const double d = distance(from, position_of(receiver));
        if (d > model.tx_range) {
            result.drops.push_back({receiver, DropReason::OutOfRange});
            return;
        }
        if (channel_success(snr_at_distance(d, model), model, rng))
            result.deliveries.push_back({receiver, delivered_at});
        else
            result.drops.push_back({receiver, DropReason::ChannelLoss});
    };

    if (tx.receiver) {
        resolve(*tx.receiver);
    } else {
        for (int node = 0; node < n_nodes; ++node) {
            if (node == tx.sender) continue;
            // broadcast addresses only nodes in range; out-of-range nodes are
            // not intended receivers and produce no drop record
            if (distance(from, position_of(node)) <= model.tx_range) resolve(node);
        }
    }
    return result;
}

std::optional<SimTime> Transmitter::enqueue(SimTime now, double air_time, bool priority) {
    waiting_.erase(std::remove_if(waiting_.begin(), waiting_.end(),
                                  [now](SimTime s) { return s <= now; }),
                   waiting_.end());
    const SimTime start = std::max(now, busy_until_);
    if (start > now) {
        if (!priority && waiting_.size() >= cap_) return std::nullopt;
        waiting_.push_back(start);
    }
    busy_until_ = start + air_time;
    return start;
}

}  // namespace manet
