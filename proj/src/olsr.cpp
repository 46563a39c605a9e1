#include "manetsim/olsr.hpp"

#include <algorithm>
#include <stdexcept>

namespace manet {

void OlsrTimers::validate() const {
    if (!(hello_interval > 0) || !(tc_interval > 0))
        throw std::invalid_argument("olsr intervals must be > 0");
    if (neighbor_hold <= hello_interval)
        throw std::invalid_argument("neighbor_hold_s must exceed hello_interval_s");
    if (topology_hold <= tc_interval)
        throw std::invalid_argument("topology_hold_s must exceed tc_interval_s");
    if (jitter < 0 || jitter >= hello_interval / 2 || jitter >= tc_interval / 2)
        throw std::invalid_argument("jitter_s must be >= 0 and small against the intervals");
}

double hello_bytes(const HelloMsg& msg) { return 16.0 + 4.0 * msg.entries.size(); }
double tc_bytes(const TcMsg& msg) { return 16.0 + 4.0 * msg.advertised.size(); }

std::set<int> select_mprs(const std::set<int>& sym_neighbors,
                          const std::map<int, std::set<int>>& two_hop) {
    std::set<int> mprs;
    std::set<int> uncovered;
    std::map<int, int> degree;  // neighbor -> total 2-hop coverage

    for (const auto& [target, vias] : two_hop) {
        if (vias.empty())
            throw std::logic_error("two-hop target with empty reaching set (table corruption)");
        uncovered.insert(target);
        for (int via : vias) {
            if (!sym_neighbors.count(via))
                throw std::logic_error("two-hop via is not a symmetric neighbor");
            ++degree[via];
        }
    }

    auto cover_by = [&](int via) {
        mprs.insert(via);
        for (auto it = uncovered.begin(); it != uncovered.end();) {
            if (two_hop.at(*it).count(via)) it = uncovered.erase(it);
            else ++it;
        }
    };

    // sole reachers are forced
    for (const auto& [target, vias] : two_hop)
        if (vias.size() == 1 && !mprs.count(*vias.begin())) cover_by(*vias.begin());

    while (!uncovered.empty()) {
        int best = -1, best_gain = -1, best_degree = -1;
        for (int via : sym_neighbors) {
            if (mprs.count(via)) continue;
            int gain = 0;
            for (int target : uncovered)
                if (two_hop.at(target).count(via)) ++gain;
            if (gain == 0) continue;
            const int deg = degree.count(via) ? degree.at(via) : 0;
            if (gain > best_gain || (gain == best_gain && deg > best_degree) ||
                (gain == best_gain && deg == best_degree && via < best)) {
                best = via;
                best_gain = gain;
                best_degree = deg;
            }
        }
        if (best < 0)
            throw std::logic_error("uncovered two-hop target has no reachable via");
        cover_by(best);
    }
    return mprs;
}

void OlsrState::tick(SimTime now) {
    if (purge(now)) {
        refresh_mprs(now);
        routes_dirty_ = true;
    }
}

bool OlsrState::purge(SimTime now) {
    bool changed = false;
    for (auto it = neighbors_.begin(); it != neighbors_.end();) {
        if (it->second.expiry <= now) {
            it = neighbors_.erase(it);
            changed = true;
        } else ++it;
    }
    for (auto it = two_hop_.begin(); it != two_hop_.end();) {
        auto& vias = it->second;
        for (auto vit = vias.begin(); vit != vias.end();) {
            if (vit->second <= now) {
                vit = vias.erase(vit);
                changed = true;
            } else ++vit;
        }
        if (vias.empty()) it = two_hop_.erase(it);
        else ++it;
    }
    for (auto it = selectors_.begin(); it != selectors_.end();) {
        if (it->second <= now) {
            it = selectors_.erase(it);
            changed = true;
        } else ++it;
    }
    for (auto it = topology_.begin(); it != topology_.end();) {
        auto& dests = it->second;
        for (auto dit = dests.begin(); dit != dests.end();) {
            if (dit->second.expiry <= now) {
                dit = dests.erase(dit);
                changed = true;
            } else ++dit;
        }
        if (dests.empty()) it = topology_.erase(it);
        else ++it;
    }
    for (auto it = duplicates_.begin(); it != duplicates_.end();) {
        if (it->second <= now) it = duplicates_.erase(it);
        else ++it;
    }
    return changed;
}

void OlsrState::refresh_mprs(SimTime now) {
    mpr_ = select_mprs(sym_neighbors(now), strict_two_hop(now));
}

std::set<int> OlsrState::sym_neighbors(SimTime now) const {
    std::set<int> out;
    for (const auto& [id, entry] : neighbors_)
        if (entry.status != LinkStatus::Asym && entry.expiry > now) out.insert(id);
    return out;
}

std::map<int, std::set<int>> OlsrState::strict_two_hop(SimTime now) const {
    const auto sym = sym_neighbors(now);
    std::map<int, std::set<int>> out;
    for (const auto& [target, vias] : two_hop_) {
        if (target == id_ || sym.count(target)) continue;
        std::set<int> valid;
        for (const auto& [via, expiry] : vias)
            if (expiry > now && sym.count(via)) valid.insert(via);
        if (!valid.empty()) out[target] = std::move(valid);
    }
    return out;
}

std::set<int> OlsrState::selector_set(SimTime now) const {
    std::set<int> out;
    for (const auto& [id, expiry] : selectors_)
        if (expiry > now) out.insert(id);
    return out;
}

HelloMsg OlsrState::emit_hello(SimTime now) {
    tick(now);
    HelloMsg msg;
    msg.originator = id_;
    msg.emitted_at = now;
    for (const auto& [id, entry] : neighbors_) {
        LinkStatus status = entry.status;
        if (status == LinkStatus::Sym && mpr_.count(id)) status = LinkStatus::Mpr;
        msg.entries.push_back({id, status});
    }
    return msg;
}

void OlsrState::process_hello(const HelloMsg& msg, SimTime now) {
    if (msg.originator == id_) return;
    tick(now);
    bool changed = false;

    bool lists_us = false;
    bool flags_us_mpr = false;
    for (const auto& e : msg.entries) {
        if (e.neighbor == id_) {
            lists_us = true;
            flags_us_mpr = e.status == LinkStatus::Mpr;
        }
    }

    auto& nb = neighbors_[msg.originator];
    const LinkStatus status = lists_us ? LinkStatus::Sym : LinkStatus::Asym;
    if (nb.expiry == 0 || nb.status != status) changed = true;
    nb.status = status;
    nb.expiry = now + timers_.neighbor_hold;

    if (status == LinkStatus::Sym) {
        // two-hop set reached through this neighbor, replaced wholesale
        std::map<int, SimTime> next;
        for (const auto& e : msg.entries) {
            if (e.neighbor == id_) continue;
            if (e.status == LinkStatus::Asym) continue;
            next[e.neighbor] = now + timers_.neighbor_hold;
        }
        for (auto it = two_hop_.begin(); it != two_hop_.end();) {
            auto& vias = it->second;
            if (vias.count(msg.originator) && !next.count(it->first)) {
                vias.erase(msg.originator);
                changed = true;
            }
            if (vias.empty()) it = two_hop_.erase(it);
            else ++it;
        }
        for (const auto& [target, expiry] : next) {
            auto& vias = two_hop_[target];
            if (!vias.count(msg.originator)) changed = true;
            vias[msg.originator] = expiry;
        }

        if (flags_us_mpr) {
            if (!selectors_.count(msg.originator)) changed = true;
            selectors_[msg.originator] = now + timers_.neighbor_hold;
        } else if (selectors_.erase(msg.originator)) {
            changed = true;
        }
    }

    if (changed) {
        refresh_mprs(now);
        routes_dirty_ = true;
    }
}

std::optional<TcMsg> OlsrState::emit_tc(SimTime now) {
    tick(now);
    const auto selectors = selector_set(now);
    if (selectors.empty()) return std::nullopt;

    TcMsg msg;
    msg.originator = id_;
    msg.advertised.assign(selectors.begin(), selectors.end());
    if (msg.advertised != last_advertised_) {
        ++ansn_;
        last_advertised_ = msg.advertised;
    }
    msg.ansn = ansn_;
    return msg;
}

void OlsrState::process_tc(const TcMsg& msg, SimTime now) {
    if (msg.originator == id_) return;
    tick(now);
    bool changed = false;

    auto& dests = topology_[msg.originator];
    for (const auto& [dest, entry] : dests) {
        if (entry.ansn > msg.ansn) return;  // stale message
    }
    for (auto it = dests.begin(); it != dests.end();) {
        if (it->second.ansn < msg.ansn) {
            it = dests.erase(it);
            changed = true;
        } else ++it;
    }
    for (int dest : msg.advertised) {
        if (dest == id_) continue;
        if (!dests.count(dest)) changed = true;
        dests[dest] = {msg.ansn, now + timers_.topology_hold};
    }
    if (dests.empty()) topology_.erase(msg.originator);

    if (changed) routes_dirty_ = true;
}

bool OlsrState::forward_flooded(const TcMsg& msg, int from, SimTime now) {
    if (msg.originator == id_) return false;  // own message echoed back
    if (msg.ttl <= 0) return false;
    tick(now);
    const auto key = std::make_pair(msg.originator, msg.ansn);
    const bool seen = duplicates_.count(key) > 0;
    duplicates_[key] = now + timers_.duplicate_hold();
    if (seen) return false;
    const auto it = selectors_.find(from);
    return it != selectors_.end() && it->second > now;
}

const std::map<int, RouteEntry>& OlsrState::compute_routes(SimTime now) {
    tick(now);
    routes_.clear();
    routes_dirty_ = false;

    std::vector<int> frontier;
    for (int nb : sym_neighbors(now)) {
        routes_[nb] = {nb, 1};
        frontier.push_back(nb);
    }

    // distance-2 destinations straight from the two-hop table
    std::vector<int> next_frontier;
    for (const auto& [target, vias] : strict_two_hop(now)) {
        if (routes_.count(target)) continue;
        routes_[target] = {*vias.begin(), 2};
        next_frontier.push_back(target);
    }

    int hops = 2;
    // extend over advertised (last hop -> dest) edges
    for (;;) {
        for (int u : frontier) {
            auto it = topology_.find(u);
            if (it == topology_.end()) continue;
            for (const auto& [dest, entry] : it->second) {
                if (entry.expiry <= now || dest == id_ || routes_.count(dest)) continue;
                routes_[dest] = {routes_.at(u).next_hop, hops};
                next_frontier.push_back(dest);
            }
        }
        if (next_frontier.empty()) break;
        frontier = std::move(next_frontier);
        next_frontier.clear();
        ++hops;
    }
    return routes_;
}

std::optional<int> OlsrState::route_data(int destination, SimTime now) {
    if (destination == id_) throw std::invalid_argument("route_data: destination is self");
    if (routes_dirty_) compute_routes(now);
    const auto it = routes_.find(destination);
    if (it == routes_.end()) return std::nullopt;
    return it->second.next_hop;
}

}  // namespace manet
