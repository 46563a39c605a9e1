#include "manetsim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace manet {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;
constexpr double kWallEps = 1e-9;

double snap_coord(double x, double hi) {
    return std::fmin(std::fmax(snap6(x), 0.0), floor6(hi));
}

Vec2 sample_point(RngStream& rng, const AreaBounds& area) {
    return {snap_coord(rng.uniform(0.0, area.width), area.width),
            snap_coord(rng.uniform(0.0, area.height), area.height)};
}

double sample_speed(RngStream& rng, const MobilityConfig& cfg) {
    const double lo = ceil6(cfg.v_min);
    const double hi = std::max(lo, floor6(cfg.v_max));
    double v = snap6(rng.uniform(lo, hi));
    return std::fmin(std::fmax(v, lo), hi);
}

MovementLeg make_leg(const Vec2& origin, const Vec2& destination, double speed, SimTime depart) {
    MovementLeg leg;
    leg.origin = origin;
    leg.destination = destination;
    leg.speed = speed;
    leg.depart_at = depart;
    leg.arrive_at = depart + distance(origin, destination) / speed;
    return leg;
}

bool on_boundary(const Vec2& p, const AreaBounds& area) {
    return p.x <= kWallEps || p.x >= area.width - kWallEps || p.y <= kWallEps ||
           p.y >= area.height - kWallEps;
}

}  // namespace

double snap6(double x) { return std::round(x * 1e6) / 1e6; }
double ceil6(double x) { return std::ceil(x * 1e6) / 1e6; }
double floor6(double x) { return std::floor(x * 1e6) / 1e6; }

const char* to_string(MobilityModel model) {
    switch (model) {
        case MobilityModel::RWP: return "rwp";
        case MobilityModel::RD: return "rd";
        case MobilityModel::MBG_SS: return "mbgss";
    }
    return "unknown";
}

MobilityModel mobility_model_from_string(const std::string& name) {
    if (name == "rwp") return MobilityModel::RWP;
    if (name == "rd") return MobilityModel::RD;
    if (name == "mbgss") return MobilityModel::MBG_SS;
    throw std::invalid_argument("unknown mobility model '" + name + "' (rwp|rd|mbgss)");
}

void MobilityConfig::validate() const {
    if (!(v_min > 0)) throw std::invalid_argument("v_min must be > 0");
    if (v_min < 1e-6) throw std::invalid_argument("v_min below trace precision (1e-6 m/s)");
    if (v_max < v_min) throw std::invalid_argument("v_max must be >= v_min");
    if (pause < 0) throw std::invalid_argument("pause must be >= 0");
}

NodeTrack init_rwp(RngStream& rng, const AreaBounds& area, const MobilityConfig& cfg, int node_id) {
    area.validate();
    cfg.validate();
    NodeTrack track;
    track.node_id = node_id;
    const Vec2 origin = sample_point(rng, area);
    Vec2 dest = sample_point(rng, area);
    while (distance(origin, dest) < 1e-9) dest = sample_point(rng, area);
    track.leg = make_leg(origin, dest, sample_speed(rng, cfg), 0.0);
    return track;
}

double next_direction_rd(RngStream& rng, const Vec2& pos, const AreaBounds& area) {
    for (;;) {
        const double theta = rng.uniform(0.0, kTwoPi);
        const double c = std::cos(theta), s = std::sin(theta);
        if (pos.x <= kWallEps && c <= 0) continue;
        if (pos.x >= area.width - kWallEps && c >= 0) continue;
        if (pos.y <= kWallEps && s <= 0) continue;
        if (pos.y >= area.height - kWallEps && s >= 0) continue;
        return theta;
    }
}

Vec2 rd_boundary_destination(const Vec2& origin, double heading, const AreaBounds& area) {
    const double c = std::cos(heading), s = std::sin(heading);
    double tx = std::numeric_limits<double>::infinity();
    double ty = std::numeric_limits<double>::infinity();
    if (c > 0) tx = (area.width - origin.x) / c;
    else if (c < 0) tx = -origin.x / c;
    if (s > 0) ty = (area.height - origin.y) / s;
    else if (s < 0) ty = -origin.y / s;
    const double t = std::min(tx, ty);
    if (!std::isfinite(t) || t <= 0)
        throw std::invalid_argument("rd heading does not reach the boundary");
    Vec2 dest;
    if (tx <= ty) {
        dest.x = c > 0 ? area.width : 0.0;
        dest.y = snap_coord(origin.y + t * s, area.height);
    } else {
        dest.y = s > 0 ? area.height : 0.0;
        dest.x = snap_coord(origin.x + t * c, area.width);
    }
    return dest;
}

NodeTrack init_rd(RngStream& rng, const AreaBounds& area, const MobilityConfig& cfg, int node_id) {
    area.validate();
    cfg.validate();
    NodeTrack track;
    track.node_id = node_id;
    const Vec2 origin = sample_point(rng, area);
    double heading;
    Vec2 dest;
    do {
        heading = on_boundary(origin, area) ? next_direction_rd(rng, origin, area)
                                            : rng.uniform(0.0, kTwoPi);
        dest = rd_boundary_destination(origin, heading, area);
    } while (distance(origin, dest) < 1e-9);
    track.heading = heading;
    track.leg = make_leg(origin, dest, sample_speed(rng, cfg), 0.0);
    return track;
}

NodeTrack init_steady_state(RngStream& rng, const AreaBounds& area, const MobilityConfig& cfg,
                            int node_id) {
    area.validate();
    cfg.validate();
    if (cfg.model == MobilityModel::MBG_SS && cfg.v_min <= 0)
        throw std::invalid_argument("steady-state speed distribution needs v_min > 0");

    NodeTrack track;
    track.node_id = node_id;

    // Stationary speed: density proportional to 1/v on [v_min, v_max].
    const double lo = ceil6(cfg.v_min);
    const double hi = std::max(lo, floor6(cfg.v_max));
    double speed = snap6(lo * std::pow(hi / lo, rng.uniform01()));
    speed = std::fmin(std::fmax(speed, lo), hi);

    // Stationary location: waypoint pair weighted by leg length, node placed
    // uniformly along the leg.
    const double d_max = std::hypot(area.width, area.height);
    Vec2 a, b;
    for (;;) {
        a = sample_point(rng, area);
        b = sample_point(rng, area);
        const double d = distance(a, b);
        if (d >= 1e-9 && rng.uniform01() * d_max < d) break;
    }
    Vec2 pos = lerp(a, b, rng.uniform01());
    pos = {snap_coord(pos.x, area.width), snap_coord(pos.y, area.height)};
    if (distance(pos, b) < 1e-9) pos = a;  // degenerate placement at the waypoint

    track.leg = make_leg(pos, b, speed, 0.0);
    return track;
}

NodeTrack init_track(RngStream& rng, const AreaBounds& area, const MobilityConfig& cfg,
                     int node_id) {
    switch (cfg.model) {
        case MobilityModel::RWP: return init_rwp(rng, area, cfg, node_id);
        case MobilityModel::RD: return init_rd(rng, area, cfg, node_id);
        case MobilityModel::MBG_SS: return init_steady_state(rng, area, cfg, node_id);
    }
    throw std::logic_error("unreachable mobility model");
}

Vec2 position_at(const MovementLeg& leg, SimTime t) {
    if (t < leg.depart_at - 1e-9 || t > leg.arrive_at + 1e-9)
        throw std::out_of_range("position query outside the current leg interval");
    if (t >= leg.arrive_at) return leg.destination;
    if (t <= leg.depart_at) return leg.origin;
    const double s = (t - leg.depart_at) / (leg.arrive_at - leg.depart_at);
    return lerp(leg.origin, leg.destination, s);
}

Vec2 track_position(const NodeTrack& track, SimTime t) {
    const MovementLeg& leg = track.leg;
    if (t < leg.depart_at) return leg.origin;
    if (t >= leg.arrive_at) return leg.destination;
    return position_at(leg, t);
}

TrackPhase track_phase(const NodeTrack& track, SimTime t) {
    return t < track.leg.depart_at ? TrackPhase::Paused : TrackPhase::Moving;
}

double track_speed(const NodeTrack& track, SimTime t) {
    return (t >= track.leg.depart_at && t <= track.leg.arrive_at) ? track.leg.speed : 0.0;
}

SimTime advance(NodeTrack& track, RngStream& rng, const AreaBounds& area,
                const MobilityConfig& cfg, SimTime now) {
    const SimTime depart = ceil6(now + cfg.pause);
    const Vec2 from = track.leg.destination;
    switch (cfg.model) {
        case MobilityModel::RWP:
        case MobilityModel::MBG_SS: {
            Vec2 dest = sample_point(rng, area);
            while (distance(from, dest) < 1e-9) dest = sample_point(rng, area);
            track.leg = make_leg(from, dest, sample_speed(rng, cfg), depart);
            break;
        }
        case MobilityModel::RD: {
            double heading;
            Vec2 dest;
            do {
                heading = next_direction_rd(rng, from, area);
                dest = rd_boundary_destination(from, heading, area);
            } while (distance(from, dest) < 1e-9);
            track.heading = heading;
            track.leg = make_leg(from, dest, sample_speed(rng, cfg), depart);
            break;
        }
    }
    return track.leg.arrive_at;
}

TrackHistory roll_forward(NodeTrack track, RngStream& rng, const AreaBounds& area,
                          const MobilityConfig& cfg, SimTime horizon) {
    TrackHistory history;
    history.node_id = track.node_id;
    history.initial = track.leg.origin;
    history.legs.push_back(track.leg);
    while (track.leg.arrive_at < horizon) {
        advance(track, rng, area, cfg, track.leg.arrive_at);
        history.legs.push_back(track.leg);
    }
    return history;
}

Vec2 history_position(const TrackHistory& history, SimTime t) {
    if (history.legs.empty()) return history.initial;
    // last leg with depart_at <= t
    auto it = std::upper_bound(history.legs.begin(), history.legs.end(), t,
                               [](SimTime v, const MovementLeg& l) { return v < l.depart_at; });
    if (it == history.legs.begin()) return history.legs.front().origin;
    const MovementLeg& leg = *(it - 1);
    if (t >= leg.arrive_at) return leg.destination;
    return position_at(leg, t);
}

double history_speed(const TrackHistory& history, SimTime t) {
    if (history.legs.empty()) return 0.0;
    auto it = std::upper_bound(history.legs.begin(), history.legs.end(), t,
                               [](SimTime v, const MovementLeg& l) { return v < l.depart_at; });
    if (it == history.legs.begin()) return 0.0;
    const MovementLeg& leg = *(it - 1);
    return t <= leg.arrive_at ? leg.speed : 0.0;
}

RngStream mobility_node_stream(std::uint64_t seed, int node_id) {
    return RngStream(seed, "run").fork("mobility").fork("n" + std::to_string(node_id));
}

std::vector<TrackHistory> build_trajectories(std::uint64_t seed, const AreaBounds& area,
                                             const MobilityConfig& cfg, int n_nodes,
                                             SimTime horizon) {
    std::vector<TrackHistory> histories;
    histories.reserve(static_cast<std::size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i) {
        RngStream rng = mobility_node_stream(seed, i);
        NodeTrack track = init_track(rng, area, cfg, i);
        histories.push_back(roll_forward(std::move(track), rng, area, cfg, horizon));
    }
    return histories;
}

double ensemble_mean_speed(const std::vector<TrackHistory>& histories, SimTime t0, SimTime t1,
                           double dt) {
    if (histories.empty() || t1 < t0 || dt <= 0)
        throw std::invalid_argument("ensemble_mean_speed: bad window");
    double sum = 0;
    std::size_t count = 0;
    for (const auto& h : histories) {
        for (SimTime t = t0; t <= t1 + 1e-12; t += dt) {
            sum += history_speed(h, t);
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

}  // namespace manet
