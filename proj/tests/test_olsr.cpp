#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <vector>

#include "manetsim/olsr.hpp"
#include "manetsim/rng.hpp"

using namespace manet;

namespace {

HelloMsg hello_from(int originator, std::vector<HelloEntry> entries, double at = 0) {
    HelloMsg msg;
    msg.originator = originator;
    msg.emitted_at = at;
    msg.entries = std::move(entries);
    return msg;
}

/// Exhaustive minimum-cover oracle over subsets of the neighbor set.
std::size_t brute_force_min_cover(const std::set<int>& sym,
                                  const std::map<int, std::set<int>>& two_hop) {
    if (two_hop.empty()) return 0;
    std::vector<int> nbs(sym.begin(), sym.end());
    const std::size_t n = nbs.size();
    std::size_t best = n + 1;
    for (std::size_t mask = 0; mask < (1ull << n); ++mask) {
        bool all_covered = true;
        for (const auto& [target, vias] : two_hop) {
            bool covered = false;
            for (std::size_t b = 0; b < n && !covered; ++b)
                if ((mask >> b & 1) && vias.count(nbs[b])) covered = true;
            if (!covered) {
                all_covered = false;
                break;
            }
        }
        if (all_covered) best = std::min(best, static_cast<std::size_t>(__builtin_popcountll(mask)));
    }
    return best;
}

struct RandomGraph {
    int n;
    std::vector<std::vector<bool>> adj;
};

RandomGraph random_connected_graph(RngStream& rng, int max_nodes) {
    for (;;) {
        const int n = 3 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_nodes - 2)));
        const double p = rng.uniform(0.15, 0.5);
        std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n),
                                           std::vector<bool>(static_cast<std::size_t>(n), false));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.uniform01() < p) adj[i][j] = adj[j][i] = true;
        // connectivity check
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        std::vector<int> stack{0};
        seen[0] = true;
        int count = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v)
                if (adj[u][v] && !seen[v]) {
                    seen[v] = true;
                    ++count;
                    stack.push_back(v);
                }
        }
        if (count == n) return {n, std::move(adj)};
    }
}

/// Neighbor and strict two-hop view of `node` from ground-truth adjacency.
std::pair<std::set<int>, std::map<int, std::set<int>>> local_view(const RandomGraph& g, int node) {
    std::set<int> sym;
    for (int v = 0; v < g.n; ++v)
        if (g.adj[node][v]) sym.insert(v);
    std::map<int, std::set<int>> two_hop;
    for (int nb : sym)
        for (int t = 0; t < g.n; ++t)
            if (g.adj[nb][t] && t != node && !sym.count(t)) two_hop[t].insert(nb);
    return {sym, two_hop};
}

}  // namespace

TEST_SUITE("olsr") {

TEST_CASE("sole reacher covers a star") {
    const std::set<int> sym{1};
    const std::map<int, std::set<int>> two_hop{{2, {1}}, {3, {1}}, {4, {1}}};
    CHECK(select_mprs(sym, two_hop) == std::set<int>{1});
}

TEST_CASE("no two-hop targets means no relays") {
    CHECK(select_mprs({1, 2, 3}, {}).empty());
}

TEST_CASE("empty reaching set is table corruption") {
    CHECK_THROWS_AS(select_mprs({1}, {{2, {}}}), std::logic_error);
}

TEST_CASE("relay selection covers all two-hop targets on random graphs") {
    RngStream rng(31, "mpr-graphs");
    for (int trial = 0; trial < 300; ++trial) {
        const auto g = random_connected_graph(rng, 20);
        for (int node = 0; node < g.n; ++node) {
            const auto [sym, two_hop] = local_view(g, node);
            const auto mprs = select_mprs(sym, two_hop);
            for (const auto& [target, vias] : two_hop) {
                bool covered = false;
                for (int m : mprs)
                    if (vias.count(m)) covered = true;
                CHECK(covered);
            }
            for (int m : mprs) CHECK(sym.count(m));
        }
    }
}

TEST_CASE("greedy relay set is never smaller than the optimum") {
    RngStream rng(32, "mpr-brute");
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_connected_graph(rng, 8);
        for (int node = 0; node < g.n; ++node) {
            const auto [sym, two_hop] = local_view(g, node);
            const auto mprs = select_mprs(sym, two_hop);
            CHECK(mprs.size() >= brute_force_min_cover(sym, two_hop));
        }
    }
}

TEST_CASE("first hello records the sender as asymmetric") {
    OlsrState a(0, OlsrTimers{});
    a.process_hello(hello_from(1, {}), 0.0);
    CHECK(a.sym_neighbors(0.5).empty());
    const auto msg = a.emit_hello(0.5);
    REQUIRE(msg.entries.size() == 1);
    CHECK(msg.entries[0].neighbor == 1);
    CHECK(msg.entries[0].status == LinkStatus::Asym);
}

TEST_CASE("hello listing us completes the handshake") {
    OlsrState a(0, OlsrTimers{});
    a.process_hello(hello_from(1, {{0, LinkStatus::Asym}}), 0.0);
    CHECK(a.sym_neighbors(0.5) == std::set<int>{1});
}

TEST_CASE("isolated node emits an empty hello") {
    OlsrState a(0, OlsrTimers{});
    CHECK(a.emit_hello(0.0).entries.empty());
}

TEST_CASE("hello carries two-hop information and the mpr flag back") {
    OlsrState a(0, OlsrTimers{});
    // b reports us symmetric and c symmetric: c becomes our strict two-hop
    a.process_hello(hello_from(1, {{0, LinkStatus::Sym}, {2, LinkStatus::Sym}}), 0.0);
    const auto two_hop = a.strict_two_hop(0.5);
    REQUIRE(two_hop.count(2));
    CHECK(two_hop.at(2) == std::set<int>{1});
    // b is the sole reacher of c, so b must be our relay, flagged in hello
    const auto msg = a.emit_hello(0.5);
    REQUIRE(msg.entries.size() == 1);
    CHECK(msg.entries[0].status == LinkStatus::Mpr);
}

TEST_CASE("mpr flag in a received hello fills the selector set") {
    OlsrState b(1, OlsrTimers{});
    b.process_hello(hello_from(0, {{1, LinkStatus::Mpr}}), 0.0);
    CHECK(b.selector_set(0.5) == std::set<int>{0});
    // a later hello without the flag clears it
    b.process_hello(hello_from(0, {{1, LinkStatus::Sym}}), 1.0);
    CHECK(b.selector_set(1.5).empty());
}

TEST_CASE("expired neighbors disappear from the tables") {
    OlsrTimers timers;
    OlsrState a(0, timers);
    a.process_hello(hello_from(1, {{0, LinkStatus::Sym}}), 0.0);
    CHECK(a.sym_neighbors(1.0) == std::set<int>{1});
    CHECK(a.sym_neighbors(timers.neighbor_hold + 0.1).empty());
}

TEST_CASE("tc is emitted only with a non-empty selector set") {
    OlsrState b(1, OlsrTimers{});
    CHECK_FALSE(b.emit_tc(0.0).has_value());
    b.process_hello(hello_from(0, {{1, LinkStatus::Mpr}}), 0.0);
    const auto tc = b.emit_tc(0.5);
    REQUIRE(tc.has_value());
    CHECK(tc->advertised == std::vector<int>{0});
}

TEST_CASE("ansn is stable while the advertised set is unchanged") {
    OlsrState b(1, OlsrTimers{});
    b.process_hello(hello_from(0, {{1, LinkStatus::Mpr}}), 0.0);
    const auto tc1 = b.emit_tc(0.5);
    const auto tc2 = b.emit_tc(1.0);
    REQUIRE(tc1.has_value());
    REQUIRE(tc2.has_value());
    CHECK(tc1->ansn == tc2->ansn);
    // a second selector changes the set and bumps the sequence number
    b.process_hello(hello_from(2, {{1, LinkStatus::Mpr}}), 1.5);
    const auto tc3 = b.emit_tc(2.0);
    REQUIRE(tc3.has_value());
    CHECK(tc3->ansn == tc1->ansn + 1);
    CHECK(tc3->advertised == std::vector<int>{0, 2});
}

TEST_CASE("forwarding requires selector status and a fresh key") {
    OlsrState b(1, OlsrTimers{});
    TcMsg tc;
    tc.originator = 5;
    tc.ansn = 3;
    tc.advertised = {7};
    tc.ttl = 10;
    // from a node that did not select us: never forwarded
    CHECK_FALSE(b.forward_flooded(tc, 2, 0.0));
    // even a selector cannot resurrect a seen key
    b.process_hello(hello_from(2, {{1, LinkStatus::Mpr}}), 0.1);
    CHECK_FALSE(b.forward_flooded(tc, 2, 0.2));
    // a fresh key from a selector is forwarded exactly once
    TcMsg tc2 = tc;
    tc2.ansn = 4;
    CHECK(b.forward_flooded(tc2, 2, 0.3));
    CHECK_FALSE(b.forward_flooded(tc2, 2, 0.4));
}

TEST_CASE("dead ttl stops forwarding") {
    OlsrState b(1, OlsrTimers{});
    b.process_hello(hello_from(2, {{1, LinkStatus::Mpr}}), 0.0);
    TcMsg tc;
    tc.originator = 5;
    tc.ansn = 1;
    tc.ttl = 0;
    CHECK_FALSE(b.forward_flooded(tc, 2, 0.1));
}

TEST_CASE("routes from sensing plus advertised links") {
    // chain 0 - 1 - 2 - 3 as node 0 sees it
    OlsrState a(0, OlsrTimers{});
    a.process_hello(hello_from(1, {{0, LinkStatus::Sym}, {2, LinkStatus::Sym}}), 0.0);
    TcMsg tc;  // node 2 advertises its selectors {1, 3}
    tc.originator = 2;
    tc.ansn = 1;
    tc.advertised = {1, 3};
    a.process_tc(tc, 0.1);
    const auto& routes = a.compute_routes(0.2);
    REQUIRE(routes.count(1));
    REQUIRE(routes.count(2));
    REQUIRE(routes.count(3));
    CHECK(routes.at(1).hops == 1);
    CHECK(routes.at(2).hops == 2);
    CHECK(routes.at(2).next_hop == 1);
    CHECK(routes.at(3).hops == 3);
    CHECK(routes.at(3).next_hop == 1);
}

TEST_CASE("isolated node has an empty routing table") {
    OlsrState a(0, OlsrTimers{});
    CHECK(a.compute_routes(0.0).empty());
}

TEST_CASE("data lookup returns the neighbor itself or nothing") {
    OlsrState a(0, OlsrTimers{});
    a.process_hello(hello_from(1, {{0, LinkStatus::Sym}}), 0.0);
    CHECK(a.route_data(1, 0.5) == 1);
    CHECK_FALSE(a.route_data(9, 0.5).has_value());
    CHECK_THROWS_AS(a.route_data(0, 0.5), std::invalid_argument);
}

TEST_CASE("stale tc with an older ansn is ignored") {
    OlsrState a(0, OlsrTimers{});
    a.process_hello(hello_from(1, {{0, LinkStatus::Sym}, {2, LinkStatus::Sym}}), 0.0);
    TcMsg fresh;
    fresh.originator = 2;
    fresh.ansn = 5;
    fresh.advertised = {3};
    a.process_tc(fresh, 0.1);
    TcMsg stale;
    stale.originator = 2;
    stale.ansn = 4;
    stale.advertised = {9};
    a.process_tc(stale, 0.2);
    const auto& routes = a.compute_routes(0.3);
    CHECK(routes.count(3));
    CHECK_FALSE(routes.count(9));
}

}  // TEST_SUITE
