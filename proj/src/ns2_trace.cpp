#include "manetsim/ns2_trace.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace manet {

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

struct SetdestLine {
    double at;
    int node;
    std::string text;
};

}  // namespace

std::string export_ns2_trace(const std::vector<TrackHistory>& histories) {
    std::ostringstream out;
    std::vector<SetdestLine> moves;
    for (const auto& h : histories) {
        const Vec2 start = h.legs.empty() ? h.initial : h.legs.front().origin;
        out << "$node_(" << h.node_id << ") set X_ " << fmt6(start.x) << "\n";
        out << "$node_(" << h.node_id << ") set Y_ " << fmt6(start.y) << "\n";
        out << "$node_(" << h.node_id << ") set Z_ 0.000000\n";
        for (const auto& leg : h.legs) {
            std::ostringstream line;
            line << "$ns_ at " << fmt6(leg.depart_at) << " \"$node_(" << h.node_id
                 << ") setdest " << fmt6(leg.destination.x) << " " << fmt6(leg.destination.y)
                 << " " << fmt6(leg.speed) << "\"";
            moves.push_back({leg.depart_at, h.node_id, line.str()});
        }
    }
    std::stable_sort(moves.begin(), moves.end(), [](const SetdestLine& a, const SetdestLine& b) {
        return a.at != b.at ? a.at < b.at : a.node < b.node;
    });
    for (const auto& m : moves) out << m.text << "\n";
    return out.str();
}

std::vector<TrackHistory> parse_ns2_trace(const std::string& text) {
    struct Pending {
        double at;
        double x, y, speed;
    };
    std::map<int, Vec2> initial;
    std::map<int, std::vector<Pending>> moves;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        int node;
        double value;
        char axis;
        if (std::sscanf(line.c_str(), "$node_(%d) set %c_ %lf", &node, &axis, &value) == 3) {
            if (axis == 'X') initial[node].x = value;
            else if (axis == 'Y') initial[node].y = value;
            else if (axis != 'Z')
                throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                            ": unknown axis");
            continue;
        }
        Pending p{};
        if (std::sscanf(line.c_str(), "$ns_ at %lf \"$node_(%d) setdest %lf %lf %lf\"", &p.at,
                        &node, &p.x, &p.y, &p.speed) == 5) {
            moves[node].push_back(p);
            continue;
        }
        throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                    ": unrecognized statement: " + line);
    }

    std::vector<TrackHistory> histories;
    for (const auto& [node, start] : initial) {
        TrackHistory h;
        h.node_id = node;
        h.initial = start;
        Vec2 pos = start;
        double free_at = 0;
        auto it = moves.find(node);
        if (it != moves.end()) {
            auto cmds = it->second;
            std::stable_sort(cmds.begin(), cmds.end(),
                             [](const Pending& a, const Pending& b) { return a.at < b.at; });
            for (const auto& cmd : cmds) {
                if (cmd.at < free_at - 1e-9)
                    throw std::invalid_argument("setdest for node " + std::to_string(node) +
                                                " overlaps the previous movement");
                if (cmd.speed <= 0)
                    throw std::invalid_argument("setdest speed must be positive");
                MovementLeg leg;
                leg.origin = pos;
                leg.destination = {cmd.x, cmd.y};
                leg.speed = cmd.speed;
                leg.depart_at = cmd.at;
                leg.arrive_at = cmd.at + distance(leg.origin, leg.destination) / cmd.speed;
                h.legs.push_back(leg);
                pos = leg.destination;
                free_at = leg.arrive_at;
            }
        }
        histories.push_back(std::move(h));
    }
    return histories;
}

}  // namespace manet
