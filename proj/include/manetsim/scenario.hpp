#pragma once

#include <cstdint>
#include <string>

#include "manetsim/geom.hpp"
#include "manetsim/link.hpp"
#include "manetsim/mobility.hpp"
#include "manetsim/olsr.hpp"
#include "manetsim/traffic.hpp"

namespace manet {

/// Fully resolved simulation configuration. Fields left on "auto" in the
/// scenario file (n_sources, vbr_rate_factor, snr_ref_m) are derived from
/// the node count the way the experiment series scales them.
struct Scenario {
    int n_nodes = 0;  // mandatory
    double horizon = 1200.0;
    std::uint64_t seed = 1;
    AreaBounds area;
    MobilityConfig mobility;
    LinkModel link;
    OlsrTimers olsr;
    TrafficKind traffic = TrafficKind::CBR;
    CbrConfig cbr;
    VbrConfig vbr;
    int n_sources = -1;  // -1 = auto: min(40, n_nodes/2)
    int ttl = 32;

    bool n_sources_explicit = false;
    bool rate_factor_explicit = false;
    bool snr_ref_explicit = false;

    /// Fill auto fields from n_nodes; call after any override of n_nodes,
    /// traffic or mobility model.
    void resolve();

    void validate() const;

    /// Stable hash of the resolved configuration.
    std::uint64_t fingerprint() const;
};

/// Parse a `key = value` scenario file ('#' comments). Unknown keys are
/// rejected with their line number; missing keys take the defaults above;
/// n_nodes is mandatory.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<string>");

/// Canonical echo of a resolved scenario; parseable by load_scenario.
std::string scenario_to_text(const Scenario& sc);

}  // namespace manet
