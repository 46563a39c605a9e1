#include "manetsim/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace manet {

namespace {

std::string fmt_opt(const std::optional<double>& v) {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", *v);
    return buf;
}

std::string fmt_val(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct Accumulator {
    std::vector<double> delays, throughputs, pdrs;
    std::vector<double> sent, received, dropped, in_flight;

    void add(const RunResult& r) {
        if (r.report.avg_delay) delays.push_back(*r.report.avg_delay);
        throughputs.push_back(r.report.throughput_bps);
        if (r.report.pdr) pdrs.push_back(*r.report.pdr);
        sent.push_back(static_cast<double>(r.report.sent));
        received.push_back(static_cast<double>(r.report.received));
        dropped.push_back(static_cast<double>(r.report.dropped));
        in_flight.push_back(static_cast<double>(r.report.in_flight));
    }
};

double mean_of(const std::vector<double>& xs) {
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

std::string aggregate_row(const std::string& cell_id, MobilityModel model, TrafficKind traffic,
                          int n_nodes, int n_sources, const Accumulator& acc, bool stddev) {
    auto stat = [&](const std::vector<double>& xs) -> std::string {
        if (xs.empty()) return "";
        return fmt_val(stddev ? stddev_of(xs) : mean_of(xs));
    };
    std::ostringstream row;
    row << cell_id << (stddev ? "_stddev" : "_mean") << ',' << to_string(model) << ','
        << to_string(traffic) << ',' << n_nodes << ',' << n_sources << ",,"
        << stat(acc.delays) << ',' << stat(acc.throughputs) << ',' << stat(acc.pdrs) << ','
        << stat(acc.sent) << ',' << stat(acc.received) << ',' << stat(acc.dropped) << ','
        << stat(acc.in_flight) << ',' << (stddev ? "stddev" : "mean");
    return row.str();
}

}  // namespace

void SweepSpec::validate() const {
    if (node_counts.empty() || models.empty() || traffics.empty())
        throw std::invalid_argument("sweep lists must be non-empty");
    if (seeds_per_cell < 1) throw std::invalid_argument("seeds per cell must be >= 1");
    for (int n : node_counts)
        if (n < 2) throw std::invalid_argument("node counts must be >= 2");
}

std::size_t SweepSpec::total_runs() const {
    return node_counts.size() * models.size() * traffics.size() *
           static_cast<std::size_t>(seeds_per_cell);
}

Scenario SweepSpec::cell_scenario(MobilityModel model, TrafficKind traffic, int n_nodes,
                                  std::uint64_t seed) const {
    Scenario sc = base;
    sc.mobility.model = model;
    sc.traffic = traffic;
    sc.n_nodes = n_nodes;
    sc.seed = seed;
    // an explicit n_sources that cannot fit a cell is kept as-is: the run
    // records a failed row instead of silently shrinking the load
    sc.n_sources = base.n_sources;
    sc.resolve();
    return sc;
}

namespace {

std::vector<RunResult> execute(const SweepSpec& spec, int jobs) {
    spec.validate();
    struct Cell {
        MobilityModel model;
        TrafficKind traffic;
        int n_nodes;
        std::uint64_t seed;
    };
    std::vector<Cell> grid;
    grid.reserve(spec.total_runs());
    for (MobilityModel model : spec.models)
        for (TrafficKind traffic : spec.traffics)
            for (int n : spec.node_counts)
                for (int s = 0; s < spec.seeds_per_cell; ++s)
                    grid.push_back({model, traffic, n, spec.base.seed + static_cast<std::uint64_t>(s)});

    std::vector<RunResult> results(grid.size());
    const auto run_one = [&](std::size_t i) {
        const Cell& c = grid[i];
        Scenario sc;
        try {
            sc = spec.cell_scenario(c.model, c.traffic, c.n_nodes, c.seed);
        } catch (const std::exception& e) {
            RunResult fail;
            fail.run_id = make_run_id(c.model, c.traffic, c.n_nodes, c.seed);
            fail.model = c.model;
            fail.traffic = c.traffic;
            fail.n_nodes = c.n_nodes;
            fail.seed = c.seed;
            fail.status = std::string("failed: ") + e.what();
            results[i] = fail;
            return;
        }
        results[i] = run_scenario(sc, c.seed);
    };

    if (jobs == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) run_one(i);
    } else {
#ifdef _OPENMP
        if (jobs > 0) omp_set_num_threads(jobs);
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < grid.size(); ++i) run_one(i);
#else
        for (std::size_t i = 0; i < grid.size(); ++i) run_one(i);
#endif
    }
    return results;
}

}  // namespace

std::vector<RunResult> sweep_serial(const SweepSpec& spec) { return execute(spec, 1); }

std::vector<RunResult> sweep_parallel(const SweepSpec& spec, int jobs) {
    return execute(spec, jobs == 1 ? 1 : jobs);
}

std::string run_result_row(const RunResult& r) {
    std::ostringstream row;
    row << r.run_id << ',' << to_string(r.model) << ',' << to_string(r.traffic) << ','
        << r.n_nodes << ',' << r.n_sources << ',' << r.seed << ',';
    if (r.status == "ok") {
        row << fmt_opt(r.report.avg_delay) << ',' << fmt_val(r.report.throughput_bps) << ','
            << fmt_opt(r.report.pdr) << ',' << r.report.sent << ',' << r.report.received << ','
            << r.report.dropped << ',' << r.report.in_flight << ",ok";
    } else {
        row << ",,,,,,," << "failed";
    }
    return row.str();
}

std::string results_to_csv(const SweepSpec& spec, const std::vector<RunResult>& results) {
    std::ostringstream out;
    out << kResultsCsvHeader << "\n";
    std::size_t i = 0;
    for (MobilityModel model : spec.models) {
        for (TrafficKind traffic : spec.traffics) {
            for (int n : spec.node_counts) {
                Accumulator acc;
                int n_sources = -1;
                for (int s = 0; s < spec.seeds_per_cell; ++s, ++i) {
                    const RunResult& r = results.at(i);
                    out << run_result_row(r) << "\n";
                    if (r.status == "ok") {
                        acc.add(r);
                        n_sources = r.n_sources;
                    }
                }
                std::ostringstream cell_id;
                cell_id << to_string(model) << "_" << to_string(traffic) << "_n" << n;
                out << aggregate_row(cell_id.str(), model, traffic, n, n_sources, acc, false)
                    << "\n";
                out << aggregate_row(cell_id.str(), model, traffic, n, n_sources, acc, true)
                    << "\n";
            }
        }
    }
    return out.str();
}

}  // namespace manet
