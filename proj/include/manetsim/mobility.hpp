#pragma once

#include <string>
#include <vector>

#include "manetsim/event_queue.hpp"
#include "manetsim/geom.hpp"
#include "manetsim/rng.hpp"

namespace manet {

enum class MobilityModel { RWP, RD, MBG_SS };

const char* to_string(MobilityModel model);
MobilityModel mobility_model_from_string(const std::string& name);

struct MobilityConfig {
    MobilityModel model = MobilityModel::RWP;
    double v_min = 1.0;   // m/s
    double v_max = 10.0;  // m/s
    double pause = 0.0;   // seconds at each waypoint

    void validate() const;
};

/// One straight movement leg. All coordinates and speeds are kept on a
/// 1e-6 grid (the movement-trace print precision) and departure times are
/// ceiled onto the same grid, so trace export/import is lossless.
struct MovementLeg {
    Vec2 origin;
    Vec2 destination;
    double speed = 0;  // m/s
    SimTime depart_at = 0;
    SimTime arrive_at = 0;
};

enum class TrackPhase { Moving, Paused };

/// Trajectory state of one node: the leg covering all times up to its
/// arrival instant. Before depart_at the node waits at the leg origin
/// (waypoint pause), between depart_at and arrive_at it moves linearly.
struct NodeTrack {
    int node_id = 0;
    MovementLeg leg;
    double heading = 0;  // radians; meaningful for RD only
};

/// Completed piecewise trajectory over [0, horizon]; gaps between legs are
/// pauses at the previous destination.
struct TrackHistory {
    int node_id = 0;
    Vec2 initial;
    std::vector<MovementLeg> legs;
};

// value quantization helpers (trace grid = 1e-6)
double snap6(double x);
double ceil6(double x);
double floor6(double x);

NodeTrack init_rwp(RngStream& rng, const AreaBounds& area, const MobilityConfig& cfg, int node_id = 0);
NodeTrack init_rd(RngStream& rng, const AreaBounds& area, const MobilityConfig& cfg, int node_id = 0);
NodeTrack init_steady_state(RngStream& rng, const AreaBounds& area, const MobilityConfig& cfg,
                            int node_id = 0);
NodeTrack init_track(RngStream& rng, const AreaBounds& area, const MobilityConfig& cfg,
                     int node_id = 0);

/// Uniform heading over the directions re-entering the area from a boundary
/// position (half-plane at a wall, quarter-plane at a corner).
double next_direction_rd(RngStream& rng, const Vec2& pos, const AreaBounds& area);

/// Boundary intersection of the ray from `origin` along `heading`.
Vec2 rd_boundary_destination(const Vec2& origin, double heading, const AreaBounds& area);

/// Position strictly within the leg interval [depart_at, arrive_at].
Vec2 position_at(const MovementLeg& leg, SimTime t);

/// Phase-aware position for any t <= leg arrival (origin while waiting,
/// destination at/after arrival).
Vec2 track_position(const NodeTrack& track, SimTime t);

TrackPhase track_phase(const NodeTrack& track, SimTime t);
double track_speed(const NodeTrack& track, SimTime t);

/// Install the next leg when the current one completes. `now` is the
/// arrival instant of the current leg; the new leg departs at now + pause
/// (ceiled to the trace grid). Returns the new arrival time for scheduling.
SimTime advance(NodeTrack& track, RngStream& rng, const AreaBounds& area,
                const MobilityConfig& cfg, SimTime now);

/// Roll a copy of `track` forward until its legs cover [0, horizon].
TrackHistory roll_forward(NodeTrack track, RngStream& rng, const AreaBounds& area,
                          const MobilityConfig& cfg, SimTime horizon);

Vec2 history_position(const TrackHistory& history, SimTime t);
double history_speed(const TrackHistory& history, SimTime t);

/// Per-node movement stream for run seed `seed`; the simulator and the
/// trace exporter derive the same streams, so they see the same motion.
RngStream mobility_node_stream(std::uint64_t seed, int node_id);

/// Full trajectories for all nodes of a run, covering [0, horizon].
std::vector<TrackHistory> build_trajectories(std::uint64_t seed, const AreaBounds& area,
                                             const MobilityConfig& cfg, int n_nodes,
                                             SimTime horizon);

/// Mean instantaneous speed over all nodes and probe times t0, t0+dt, ... t1.
double ensemble_mean_speed(const std::vector<TrackHistory>& histories, SimTime t0, SimTime t1,
                           double dt = 1.0);

}  // namespace manet
