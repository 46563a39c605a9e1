#pragma once

#include <string>
#include <vector>

#include "manetsim/scenario.hpp"
#include "manetsim/simulation.hpp"

namespace manet {

/// Node-density experiment grid: every (model, traffic, n_nodes, seed)
/// combination of the lists below, run against the base scenario.
struct SweepSpec {
    Scenario base;
    std::vector<int> node_counts{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    std::vector<MobilityModel> models{MobilityModel::RWP, MobilityModel::RD,
                                      MobilityModel::MBG_SS};
    std::vector<TrafficKind> traffics{TrafficKind::CBR, TrafficKind::VBR};
    int seeds_per_cell = 10;

    void validate() const;
    std::size_t total_runs() const;

    /// The resolved scenario of one grid cell.
    Scenario cell_scenario(MobilityModel model, TrafficKind traffic, int n_nodes,
                           std::uint64_t seed) const;
};

inline constexpr const char* kResultsCsvHeader =
    "run_id,model,traffic,n_nodes,n_sources,seed,avg_delay_s,throughput_bps,pdr,sent,received,"
    "dropped,in_flight,status";

/// Execute every run of the grid. The parallel path distributes independent
/// runs over OpenMP threads; results are identical to the serial reference
/// because runs share no state and rows are emitted in grid order.
std::vector<RunResult> sweep_serial(const SweepSpec& spec);
std::vector<RunResult> sweep_parallel(const SweepSpec& spec, int jobs = 0);  // 0 = all cores

/// Data rows in grid order, with one mean and one stddev row appended per
/// (model, traffic, n_nodes) cell, aggregated over its ok seeds.
std::string results_to_csv(const SweepSpec& spec, const std::vector<RunResult>& results);

std::string run_result_row(const RunResult& r);

}  // namespace manet
