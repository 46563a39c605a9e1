#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "manetsim/link.hpp"

using namespace manet;

TEST_SUITE("link") {

TEST_CASE("connectivity is inclusive at exactly tx_range") {
    LinkModel m;
    m.tx_range = 250;
    const auto adj = connectivity({{0, 0}, {250, 0}}, m);
    CHECK(adj[0][1]);
    CHECK(adj[1][0]);
    CHECK_FALSE(adj[0][0]);
}

TEST_CASE("collinear chain connects only consecutive nodes") {
    LinkModel m;
    m.tx_range = 250;
    const auto adj = connectivity({{0, 0}, {250, 0}, {500, 0}}, m);
    CHECK(adj[0][1]);
    CHECK(adj[1][2]);
    CHECK_FALSE(adj[0][2]);
}

TEST_CASE("connectivity equals the brute-force distance check") {
    LinkModel m;
    m.tx_range = 250;
    RngStream rng(21, "conn");
    std::vector<Vec2> pos;
    for (int i = 0; i < 50; ++i) pos.push_back({rng.uniform(0, 1000), rng.uniform(0, 1000)});
    const auto adj = connectivity(pos, m);
    for (std::size_t i = 0; i < pos.size(); ++i) {
        for (std::size_t j = 0; j < pos.size(); ++j) {
            const bool expected = i != j && distance(pos[i], pos[j]) <= m.tx_range;
            CHECK(adj[i][j] == expected);
            CHECK(adj[i][j] == adj[j][i]);
        }
    }
}

TEST_CASE("packet success boundaries") {
    LinkModel step;
    step.curve = SuccessCurve::Step;
    LinkModel expo;
    expo.curve = SuccessCurve::Exponential;
    CHECK(packet_success(0.0, step) == 0.0);
    CHECK(packet_success(0.0, expo) == 0.0);
    CHECK(packet_success(step.step_threshold, step) == 1.0);
    CHECK(packet_success(0.5 * step.step_threshold, step) == 0.0);
    CHECK_THROWS_AS(packet_success(-1.0, step), std::invalid_argument);
}

TEST_CASE("packet success is monotone in gamma") {
    LinkModel expo;
    expo.curve = SuccessCurve::Exponential;
    LinkModel step;
    RngStream rng(22, "mono");
    for (int i = 0; i < 1000; ++i) {
        double g1 = rng.uniform(0.0, 5.0), g2 = rng.uniform(0.0, 5.0);
        if (g1 > g2) std::swap(g1, g2);
        CHECK(packet_success(g1, expo) <= packet_success(g2, expo));
        CHECK(packet_success(g1, step) <= packet_success(g2, step));
    }
}

TEST_CASE("throughput formula is exact") {
    LinkModel m;  // step curve, f = 1 at gamma >= 1
    CHECK(effective_throughput(512, 64, 2e6, 1.0, m) == doctest::Approx(1.75e6));
    CHECK(effective_throughput(512, 0, 2e6, 1.0, m) == 2e6);
    CHECK(effective_throughput(512, 64, 2e6, 0.0, m) == 0.0);
    CHECK_THROWS_AS(effective_throughput(64, 64, 2e6, 1.0, m), std::invalid_argument);
}

TEST_CASE("throughput is linear in rate and success, non-increasing in overhead") {
    LinkModel m;
    RngStream rng(23, "lin");
    for (int i = 0; i < 200; ++i) {
        const double L = rng.uniform(100, 2000);
        const double C = rng.uniform(0, L - 1);
        const double R = rng.uniform(1e5, 1e7);
        const double t1 = effective_throughput(L, C, R, 2.0, m);
        CHECK(effective_throughput(L, C, 2 * R, 2.0, m) == doctest::Approx(2 * t1));
        const double c2 = std::min(L - 0.5, C + rng.uniform(0, 100));
        CHECK(effective_throughput(L, c2, R, 2.0, m) <= t1 + 1e-9);
    }
}

TEST_CASE("unicast delivery lands exactly after the air time") {
    LinkModel m;  // defaults: 2 Mb/s, 58 B header, 250 m range
    RngStream rng(24, "tx");
    Transmission tx;
    tx.sender = 0;
    tx.receiver = 1;
    tx.payload_bytes = 512;
    tx.start = 10.0;
    tx.air_time = m.air_time(512);
    const auto res = transmit(tx, rng, {{0, 0}, {100, 0}}, m);
    REQUIRE(res.deliveries.size() == 1);
    CHECK(res.drops.empty());
    CHECK(res.deliveries[0].receiver == 1);
    CHECK(res.deliveries[0].at == doctest::Approx(10.0 + (512 + 58) * 8 / 2e6));
}

TEST_CASE("out-of-range unicast is dropped with the reason") {
    LinkModel m;
    RngStream rng(25, "oor");
    Transmission tx;
    tx.sender = 0;
    tx.receiver = 1;
    tx.payload_bytes = 512;
    tx.air_time = m.air_time(512);
    const auto res = transmit(tx, rng, {{0, 0}, {600, 0}}, m);
    CHECK(res.deliveries.empty());
    REQUIRE(res.drops.size() == 1);
    CHECK(res.drops[0].reason == DropReason::OutOfRange);
}

TEST_CASE("broadcast reaches every adjacent node under an ideal channel") {
    LinkModel m;
    RngStream rng(26, "bcast");
    std::vector<Vec2> pos{{0, 0}, {50, 0}, {0, 50}, {-50, 0}, {0, -50}, {100, 100}};
    Transmission tx;
    tx.sender = 0;
    tx.payload_bytes = 64;
    tx.air_time = m.air_time(64);
    const auto res = transmit(tx, rng, pos, m);
    CHECK(res.deliveries.size() == 5);
    CHECK(res.drops.empty());
}

TEST_CASE("every intended receiver gets exactly one outcome") {
    LinkModel m;
    m.curve = SuccessCurve::Exponential;  // lossy channel
    m.exp_k = 0.3;
    RngStream rng(27, "conserve");
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vec2> pos;
        for (int i = 0; i < 10; ++i) pos.push_back({rng.uniform(0, 400), rng.uniform(0, 400)});
        Transmission tx;
        tx.sender = 0;
        tx.payload_bytes = 512;
        tx.air_time = m.air_time(512);
        const auto res = transmit(tx, rng, pos, m);
        std::size_t adjacent = 0;
        for (int i = 1; i < 10; ++i)
            if (distance(pos[0], pos[static_cast<std::size_t>(i)]) <= m.tx_range) ++adjacent;
        CHECK(res.deliveries.size() + res.drops.size() == adjacent);
    }
}

TEST_CASE("replay with the same stream is identical") {
    LinkModel m;
    m.curve = SuccessCurve::Exponential;
    m.exp_k = 0.5;
    std::vector<Vec2> pos{{0, 0}, {200, 0}, {0, 200}, {150, 150}};
    Transmission tx;
    tx.sender = 0;
    tx.payload_bytes = 256;
    tx.air_time = m.air_time(256);
    RngStream rng_a(5, "replay"), rng_b(5, "replay");
    for (int i = 0; i < 100; ++i) {
        const auto a = transmit(tx, rng_a, pos, m);
        const auto b = transmit(tx, rng_b, pos, m);
        REQUIRE(a.deliveries.size() == b.deliveries.size());
        for (std::size_t k = 0; k < a.deliveries.size(); ++k)
            CHECK(a.deliveries[k].receiver == b.deliveries[k].receiver);
    }
}

TEST_CASE("transmitter serializes and tail-drops past the bound") {
    Transmitter tx(2);
    const double air = 1.0;
    CHECK(tx.enqueue(0.0, air) == doctest::Approx(0.0));   // starts immediately
    CHECK(tx.enqueue(0.0, air) == doctest::Approx(1.0));   // queued
    CHECK(tx.enqueue(0.0, air) == doctest::Approx(2.0));   // queued
    CHECK_FALSE(tx.enqueue(0.0, air).has_value());         // bound reached
    CHECK(tx.enqueue(1.5, air) == doctest::Approx(3.0));   // first waiter started; room again
}

}  // TEST_SUITE
