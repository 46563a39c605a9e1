#include <doctest.h>

#include <stdexcept>

#include "manetsim/scenario.hpp"

using namespace manet;

TEST_SUITE("scenario") {

TEST_CASE("empty file fails on the mandatory node count") {
    CHECK_THROWS_WITH_AS(parse_scenario_text(""), doctest::Contains("n_nodes"),
                         std::invalid_argument);
}

TEST_CASE("table defaults land in the right fields") {
    const Scenario sc = parse_scenario_text(
        "n_nodes = 50\n"
        "area_width_m = 1000\narea_height_m = 1000\n"
        "horizon_s = 1200\nv_max_mps = 10\npause_s = 0\n");
    CHECK(sc.n_nodes == 50);
    CHECK(sc.horizon == 1200.0);
    CHECK(sc.area.width == 1000.0);
    CHECK(sc.area.height == 1000.0);
    CHECK(sc.mobility.v_max == 10.0);
    CHECK(sc.mobility.pause == 0.0);
    CHECK(sc.mobility.v_min == 1.0);     // recorded default
    CHECK(sc.link.tx_range == 250.0);    // recorded default
    CHECK(sc.olsr.hello_interval == 2.0);
    CHECK(sc.n_sources == 25);           // auto: min(40, n/2)
    CHECK(sc.vbr.rate_factor == 0.25);   // auto below 40 sources
}

TEST_CASE("misspelled keys are rejected with their line") {
    CHECK_THROWS_WITH_AS(parse_scenario_text("n_nodes = 10\npase_time = 0\n"),
                         doctest::Contains("pase_time"), std::invalid_argument);
}

TEST_CASE("invariant violations name the key") {
    CHECK_THROWS_WITH_AS(parse_scenario_text("n_nodes = 10\nv_min_mps = 0\n"),
                         doctest::Contains("v_min"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_text("n_nodes = 1\n"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_scenario_text("n_nodes = 10\nn_sources = 6\n"),
                         doctest::Contains("n_sources"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_scenario_text("n_nodes = 10\nmobility = walk\n"),
                         doctest::Contains("walk"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_scenario_text("n_nodes = ten\n"), doctest::Contains("integer"),
                         std::invalid_argument);
}

TEST_CASE("comments and duplicate keys") {
    const Scenario sc = parse_scenario_text("# header\nn_nodes = 10  # trailing comment\n");
    CHECK(sc.n_nodes == 10);
    CHECK_THROWS_WITH_AS(parse_scenario_text("n_nodes = 10\nn_nodes = 20\n"),
                         doctest::Contains("duplicate"), std::invalid_argument);
}

TEST_CASE("forty sources switch the auto rate factor") {
    const Scenario sc = parse_scenario_text("n_nodes = 100\n");
    CHECK(sc.n_sources == 40);
    CHECK(sc.vbr.rate_factor == 0.33);
    const Scenario fixed = parse_scenario_text("n_nodes = 100\nvbr_rate_factor = 0.5\n");
    CHECK(fixed.vbr.rate_factor == 0.5);
}

TEST_CASE("echo round-trips through the parser") {
    const Scenario sc = parse_scenario_text(
        "n_nodes = 30\nmobility = rd\ntraffic = vbr\nseed = 77\n"
        "tx_range_m = 200\nhello_interval_s = 1.5\nneighbor_hold_s = 4.5\n");
    const std::string echo = scenario_to_text(sc);
    const Scenario back = parse_scenario_text(echo);
    CHECK(scenario_to_text(back) == echo);
    CHECK(back.fingerprint() == sc.fingerprint());
    CHECK(back.n_nodes == 30);
    CHECK(back.mobility.model == MobilityModel::RD);
    CHECK(back.traffic == TrafficKind::VBR);
    CHECK(back.seed == 77);
    CHECK(back.link.snr_ref == 200.0);  // auto-tied to tx_range
}

TEST_CASE("fingerprint tracks any field change") {
    const Scenario a = parse_scenario_text("n_nodes = 30\n");
    const Scenario b = parse_scenario_text("n_nodes = 31\n");
    const Scenario c = parse_scenario_text("n_nodes = 30\nseed = 2\n");
    CHECK(a.fingerprint() != b.fingerprint());
    CHECK(a.fingerprint() != c.fingerprint());
    CHECK(a.fingerprint() == parse_scenario_text("n_nodes = 30\n").fingerprint());
}

}  // TEST_SUITE
