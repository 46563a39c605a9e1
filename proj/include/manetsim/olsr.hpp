#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "manetsim/event_queue.hpp"

namespace manet {

enum class LinkStatus { Asym, Sym, Mpr };

struct HelloEntry {
    int neighbor;
    LinkStatus status;
};

/// Local link-sensing message; broadcast, never forwarded.
struct HelloMsg {
    int originator = 0;
    SimTime emitted_at = 0;
    std::vector<HelloEntry> entries;
};

/// Topology-control message, flooded over the MPR backbone.
struct TcMsg {
    int originator = 0;
    std::uint32_t ansn = 0;
    std::vector<int> advertised;  // current MPR selectors of the originator
    int ttl = 255;
    int hop_count = 0;
};

struct OlsrTimers {
    double hello_interval = 2.0;
    double tc_interval = 5.0;
    double neighbor_hold = 6.0;
    double topology_hold = 15.0;
    double jitter = 0.1;  // +- on each periodic emission

    /// Hold on duplicate-suppression entries: shorter than the TC period so
    /// periodic same-ANSN refreshes flood again, longer than one flood pass.
    double duplicate_hold() const { return 0.6 * tc_interval; }

    void validate() const;
};

/// Control message size on the wire: fixed header plus one address per
/// listed id. Recorded choice; the protocol itself does not depend on it.
double hello_bytes(const HelloMsg& msg);
double tc_bytes(const TcMsg& msg);

struct RouteEntry {
    int next_hop = -1;
    int hops = 0;
};

/// Greedy multipoint-relay selection: sole reachers first, then highest
/// uncovered coverage (ties: higher total coverage, then lower id) until
/// every 2-hop target is covered.
std::set<int> select_mprs(const std::set<int>& sym_neighbors,
                          const std::map<int, std::set<int>>& two_hop);

/// Per-node protocol state: link sensing, MPR selection, topology diffusion
/// and minimum-hop route computation.
class OlsrState {
public:
    OlsrState(int id, OlsrTimers timers) : id_(id), timers_(timers) { timers_.validate(); }

    int id() const { return id_; }

    HelloMsg emit_hello(SimTime now);
    void process_hello(const HelloMsg& msg, SimTime now);

    std::optional<TcMsg> emit_tc(SimTime now);
    void process_tc(const TcMsg& msg, SimTime now);

    /// Flooding rule: relay iff the previous hop elected us MPR and the
    /// (originator, ANSN) key is not in the duplicate set. The duplicate set
    /// is updated regardless of the decision.
    bool forward_flooded(const TcMsg& msg, int from, SimTime now);

    const std::map<int, RouteEntry>& compute_routes(SimTime now);

    /// Data-plane lookup; recomputes routes when tables changed.
    std::optional<int> route_data(int destination, SimTime now);

    // inspection
    std::set<int> sym_neighbors(SimTime now) const;
    std::map<int, std::set<int>> strict_two_hop(SimTime now) const;
    const std::set<int>& mpr_set() const { return mpr_; }
    std::set<int> selector_set(SimTime now) const;
    std::uint32_t ansn() const { return ansn_; }

private:
    struct NeighborEntry {
        LinkStatus status = LinkStatus::Asym;
        SimTime expiry = 0;
    };
    struct TopologyEntry {
        std::uint32_t ansn = 0;
        SimTime expiry = 0;
    };

    void tick(SimTime now);
    bool purge(SimTime now);
    void refresh_mprs(SimTime now);

    int id_;
    OlsrTimers timers_;

    std::map<int, NeighborEntry> neighbors_;
    std::map<int, std::map<int, SimTime>> two_hop_;        // 2-hop id -> via -> expiry
    std::map<int, SimTime> selectors_;                     // selector id -> expiry
    std::map<int, std::map<int, TopologyEntry>> topology_; // last hop -> dest -> entry
    std::map<std::pair<int, std::uint32_t>, SimTime> duplicates_;

    std::set<int> mpr_;
    std::uint32_t ansn_ = 0;
    std::vector<int> last_advertised_;

    std::map<int, RouteEntry> routes_;
    bool routes_dirty_ = true;
};

}  // namespace manet
