#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "manetsim/simulation.hpp"
#include "manetsim/sweep.hpp"

using namespace manet;

namespace {

Scenario base_scenario(int horizon = 60) {
    Scenario sc;
    sc.n_nodes = 2;  // overwritten by fixed positions
    sc.horizon = horizon;
    sc.resolve();
    return sc;
}

Flow flow_between(int src, int dst, double start, double stop, TrafficKind kind) {
    Flow f;
    f.flow_id = 0;
    f.source = src;
    f.destination = dst;
    f.start = start;
    f.stop = stop;
    f.kind = kind;
    return f;
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("three-node chain converges to two-hop knowledge and routes") {
    const std::vector<Vec2> chain{{0, 0}, {200, 0}, {400, 0}};
    Simulation sim(base_scenario(40), 1, chain);
    sim.run_until(30.0);

    // ends see the far node through the middle
    const auto two_hop_a = sim.olsr_state(0).strict_two_hop(30.0);
    REQUIRE(two_hop_a.count(2));
    CHECK(two_hop_a.at(2) == std::set<int>{1});

    // only the middle node is anyone's relay
    CHECK(sim.olsr_state(1).selector_set(30.0) == std::set<int>{0, 2});
    CHECK(sim.olsr_state(0).selector_set(30.0).empty());
    CHECK(sim.olsr_state(2).selector_set(30.0).empty());

    // hello from an end flags the middle as its relay
    const auto hello = sim.olsr_state(0).emit_hello(30.0);
    bool middle_flagged = false;
    for (const auto& e : hello.entries)
        if (e.neighbor == 1 && e.status == LinkStatus::Mpr) middle_flagged = true;
    CHECK(middle_flagged);

    auto& a = sim.olsr_state(0);
    CHECK(a.route_data(2, 30.0) == 1);
    CHECK(a.compute_routes(30.0).at(2).hops == 2);
}

TEST_CASE("tc crosses the chain over relays, one forward per node") {
    // ends of a chain are nobody's relay and originate no tc of their own;
    // node 1's tc must traverse exactly 3 links to reach node 4
    const std::vector<Vec2> chain{{0, 0}, {200, 0}, {400, 0}, {600, 0}, {800, 0}};
    Simulation sim(base_scenario(40), 1, chain);
    int min_links = 100;
    int copies_far = 0, copies_near = 0;
    sim.tc_sniffer = [&](const TcMsg& tc, int, int to, SimTime) {
        if (tc.originator != 1) return;
        if (to == 4) {
            min_links = std::min(min_links, tc.hop_count + 1);
            ++copies_far;
        }
        if (to == 0) ++copies_near;  // one direct copy per flood
    };
    sim.run();
    CHECK(min_links == 3);
    // duplicate suppression: each flood delivers exactly one copy to the end
    CHECK(copies_far == copies_near);
    CHECK(copies_far > 0);
}

TEST_CASE("data crosses the chain through the relay") {
    const std::vector<Vec2> chain{{0, 0}, {200, 0}, {400, 0}};
    Scenario sc = base_scenario(60);
    sc.cbr.rate_pps = 2.0;
    Simulation sim(sc, 1, chain,
                   std::vector<Flow>{flow_between(0, 2, 20.0, 60.0, TrafficKind::CBR)});
    sim.run();
    const auto report = sim.ledger().report();
    CHECK(report.sent == 80);
    CHECK(report.received == 80);
    CHECK(*report.pdr == 1.0);
    // two store-and-forward hops, no queueing on an idle chain
    const double hop_air = sc.link.air_time(sc.cbr.packet_bytes);
    CHECK(*report.avg_delay == doctest::Approx(2 * hop_air).epsilon(0.01));
}

TEST_CASE("adjacent pair delivers everything after the convergence lead-in") {
    Scenario sc = base_scenario(120);
    Simulation sim(sc, 3, {{0, 0}, {100, 0}});
    sim.run();
    const auto report = sim.ledger().report();
    CHECK(report.sent > 0);
    CHECK(*report.pdr == 1.0);
    CHECK(report.dropped == 0);
}

TEST_CASE("separated pair drops everything with no route") {
    Scenario sc = base_scenario(60);
    Simulation sim(sc, 3, {{0, 0}, {600, 0}});
    sim.run();
    const auto report = sim.ledger().report();
    CHECK(report.sent > 0);
    CHECK(report.received == 0);
    CHECK(*report.pdr == 0.0);
    REQUIRE(report.drop_histogram.count(DropReason::NoRoute));
    CHECK(report.drop_histogram.at(DropReason::NoRoute) == report.dropped);
}

TEST_CASE("control traffic flows but never enters the data ledger") {
    Scenario sc = base_scenario(30);
    Simulation sim(sc, 5, {{0, 0}, {100, 0}, {200, 0}},
                   std::vector<Flow>{flow_between(0, 2, 10.0, 30.0, TrafficKind::CBR)});
    sim.run();
    CHECK(sim.extras().control_messages_sent > 0);
    CHECK(sim.extras().control_deliveries > 0);
    // ledger holds exactly the data emissions: 4 pps * 20 s
    CHECK(sim.ledger().sent() == 80);
}

TEST_CASE("saturated ideal link matches the throughput formula") {
    Scenario sc = base_scenario(600);
    sc.cbr.rate_pps = 1000.0;  // well past the link capacity
    Simulation sim(sc, 7, {{0, 0}, {100, 0}});
    sim.run();
    const double L = sc.cbr.packet_bytes + sc.link.header_bytes;
    const double expected =
        effective_throughput(L, sc.link.header_bytes, sc.link.bitrate, 1.0, sc.link);
    CHECK(sim.ledger().measured_throughput() == doctest::Approx(expected).epsilon(0.05));
    // the queue bound was the limiting factor
    const auto report = sim.ledger().report();
    CHECK(report.drop_histogram.at(DropReason::QueueFull) > 0);
}

TEST_CASE("identical scenario and seed replay identically") {
    Scenario sc = base_scenario(120);
    sc.n_nodes = 15;
    sc.traffic = TrafficKind::VBR;
    sc.resolve();
    const RunResult a = run_scenario(sc, 11);
    const RunResult b = run_scenario(sc, 11);
    CHECK(a.status == "ok");
    CHECK(a.extras.event_digest == b.extras.event_digest);
    CHECK(run_result_row(a) == run_result_row(b));
    CHECK(a.report.sent == b.report.sent);
    CHECK(a.report.received == b.report.received);
    // a different seed takes a different path
    const RunResult c = run_scenario(sc, 12);
    CHECK(a.extras.event_digest != c.extras.event_digest);
}

TEST_CASE("mobile run conserves every packet and samples speeds") {
    Scenario sc = base_scenario(120);
    sc.n_nodes = 20;
    sc.resolve();
    for (MobilityModel model : {MobilityModel::RWP, MobilityModel::RD, MobilityModel::MBG_SS}) {
        sc.mobility.model = model;
        const RunResult r = run_scenario(sc, 21);
        REQUIRE(r.status == "ok");
        CHECK(r.report.sent ==
              r.report.received + r.report.dropped + r.report.in_flight);
        CHECK(r.extras.mean_speed_early > 0);
    }
}

TEST_CASE("simulated motion equals the exported trajectories") {
    Scenario sc = base_scenario(200);
    sc.n_nodes = 8;
    sc.resolve();
    Simulation sim(sc, 33);
    const auto histories =
        build_trajectories(33, sc.area, sc.mobility, sc.n_nodes, sc.horizon);
    for (double t : {0.0, 12.5, 63.0, 121.7, 199.9}) {
        sim.run_until(t);
        for (int node = 0; node < sc.n_nodes; ++node) {
            CHECK(distance(sim.node_position(node, t),
                           history_position(histories[static_cast<std::size_t>(node)], t)) <
                  1e-9);
        }
    }
}

}  // TEST_SUITE
