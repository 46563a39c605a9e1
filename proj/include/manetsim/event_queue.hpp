#pragma once

#include <any>
#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

namespace manet {

/// Simulation time, in seconds.
using SimTime = double;

enum class EventKind {
    WaypointReached,
    EmitHello,
    EmitTc,
    TrafficEmit,
    PacketArrival,
    MetricsSnapshot,
};

const char* to_string(EventKind kind);

struct Event {
    SimTime fire_at = 0;
    std::uint64_t seq = 0;  // insertion counter, unique per run
    EventKind kind = EventKind::MetricsSnapshot;
    std::any payload;
};

using EventHandle = std::uint64_t;

/// Deterministic event scheduler. Events are processed in (fire_at, seq)
/// order; equal fire times replay in insertion order. Scheduling before the
/// current clock is a contract violation.
class EventQueue {
public:
    EventHandle schedule(SimTime at, EventKind kind, std::any payload = {});

    /// True if the event was still pending and is now removed; false if it
    /// already fired or was already cancelled.
    bool cancel(EventHandle handle);

    /// Process all events with fire_at <= limit, in order, through
    /// `dispatcher`. Returns the final clock value (== limit).
    /// A dispatcher exception aborts the run with the offending event named.
    SimTime run_until(SimTime limit, const std::function<void(const Event&)>& dispatcher);

    SimTime now() const { return clock_; }
    std::size_t pending() const { return live_.size(); }

private:
    struct HeapEntry {
        SimTime fire_at;
        std::uint64_t seq;
        bool operator>(const HeapEntry& o) const {
            return fire_at != o.fire_at ? fire_at > o.fire_at : seq > o.seq;
        }
    };

    SimTime clock_ = 0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap_;
    std::unordered_map<std::uint64_t, Event> live_;
};

}  // namespace manet
