#include "manetsim/event_queue.hpp"

#include <sstream>
#include <stdexcept>

namespace manet {

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::WaypointReached: return "waypoint-reached";
        case EventKind::EmitHello: return "emit-hello";
        case EventKind::EmitTc: return "emit-tc";
        case EventKind::TrafficEmit: return "traffic-emit";
        case EventKind::PacketArrival: return "packet-arrival";
        case EventKind::MetricsSnapshot: return "metrics-snapshot";
    }
    return "unknown";
}

EventHandle EventQueue::schedule(SimTime at, EventKind kind, std::any payload) {
    if (at < clock_) {
        std::ostringstream msg;
        msg << "schedule(" << to_string(kind) << ") at t=" << at
            << " is in the past (clock=" << clock_ << ")";
        throw std::invalid_argument(msg.str());
    }
    const std::uint64_t seq = next_seq_++;
    live_.emplace(seq, Event{at, seq, kind, std::move(payload)});
    heap_.push(HeapEntry{at, seq});
    return seq;
}

bool EventQueue::cancel(EventHandle handle) { return live_.erase(handle) > 0; }

SimTime EventQueue::run_until(SimTime limit, const std::function<void(const Event&)>& dispatcher) {
    if (limit < clock_) throw std::invalid_argument("run_until limit precedes current clock");
    while (!heap_.empty() && heap_.top().fire_at <= limit) {
        const HeapEntry top = heap_.top();
        heap_.pop();
        auto it = live_.find(top.seq);
        if (it == live_.end()) continue;  // cancelled
        Event ev = std::move(it->second);
        live_.erase(it);
        clock_ = ev.fire_at;
        try {
            dispatcher(ev);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "dispatcher failed on event {kind=" << to_string(ev.kind)
                << ", t=" << ev.fire_at << ", seq=" << ev.seq << "}: " << e.what();
            throw std::runtime_error(msg.str());
        }
    }
    clock_ = limit;
    return clock_;
}

}  // namespace manet
