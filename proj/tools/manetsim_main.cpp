#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "manetsim/ns2_trace.hpp"
#include "manetsim/plot.hpp"
#include "manetsim/scenario.hpp"
#include "manetsim/simulation.hpp"
#include "manetsim/sweep.hpp"

namespace fs = std::filesystem;
using namespace manet;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

/// "10..100:10" or a comma list "10,20,40".
std::vector<int> parse_node_list(const std::string& spec) {
    std::vector<int> out;
    const auto range_sep = spec.find("..");
    if (range_sep != std::string::npos) {
        const auto step_sep = spec.find(':', range_sep);
        const int lo = std::stoi(spec.substr(0, range_sep));
        const int hi = std::stoi(spec.substr(range_sep + 2, step_sep - range_sep - 2));
        const int step = step_sep == std::string::npos ? 10 : std::stoi(spec.substr(step_sep + 1));
        if (step <= 0 || hi < lo) throw std::runtime_error("bad node range: " + spec);
        for (int n = lo; n <= hi; n += step) out.push_back(n);
        return out;
    }
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stoi(tok));
    if (out.empty()) throw std::runtime_error("empty node list");
    return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& spec, T (*from)(const std::string&)) {
    std::vector<T> out;
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(from(tok));
    if (out.empty()) throw std::runtime_error("empty list: " + spec);
    return out;
}

int cmd_run(const std::string& config, std::uint64_t seed, bool seed_set,
            const std::string& out_dir) {
    Scenario sc = load_scenario(config);
    if (seed_set) sc.seed = seed;
    fs::create_directories(out_dir);

    Simulation sim(sc, sc.seed);
    sim.run();
    const auto report = sim.ledger().report();

    RunResult result;
    result.run_id = make_run_id(sc.mobility.model, sc.traffic, sc.n_nodes, sc.seed);
    result.fingerprint = sim.scenario().fingerprint();
    result.seed = sc.seed;
    result.model = sc.mobility.model;
    result.traffic = sc.traffic;
    result.n_nodes = sc.n_nodes;
    result.n_sources = sim.scenario().n_sources;
    result.report = report;
    result.extras = sim.extras();

    write_file(fs::path(out_dir) / "scenario_resolved.cfg", scenario_to_text(sim.scenario()));
    write_file(fs::path(out_dir) / "records.csv", sim.ledger().dump_csv());
    std::ostringstream csv;
    csv << kResultsCsvHeader << "\n" << run_result_row(result) << "\n";
    write_file(fs::path(out_dir) / "results.csv", csv.str());

    std::cout << "run " << result.run_id << " finished at t=" << sim.now() << " s\n";
    std::cout << "  sent=" << report.sent << " received=" << report.received
              << " dropped=" << report.dropped << " in_flight=" << report.in_flight << "\n";
    if (report.avg_delay) std::cout << "  avg_delay_s=" << *report.avg_delay << "\n";
    std::cout << "  throughput_bps=" << report.throughput_bps << "\n";
    if (report.pdr) std::cout << "  pdr=" << *report.pdr << "\n";
    std::cout << "  outputs in " << out_dir << "\n";
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& nodes, const std::string& models,
              const std::string& traffics, int seeds, int jobs, const std::string& out_dir) {
    SweepSpec spec;
    spec.base = load_scenario(config);
    if (!nodes.empty()) spec.node_counts = parse_node_list(nodes);
    if (!models.empty()) spec.models = parse_list<MobilityModel>(models, [](const std::string& s) {
        return mobility_model_from_string(s);
    });
    if (!traffics.empty()) spec.traffics = parse_list<TrafficKind>(traffics, [](const std::string& s) {
        return traffic_kind_from_string(s);
    });
    spec.seeds_per_cell = seeds;
    spec.validate();

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "scenario_resolved.cfg", scenario_to_text(spec.base));

    std::cerr << "sweep: " << spec.total_runs() << " runs ("
              << (jobs == 1 ? "serial" : "parallel") << ")\n";
    const auto results = jobs == 1 ? sweep_serial(spec) : sweep_parallel(spec, jobs);
    std::size_t failed = 0;
    for (const auto& r : results) {
        if (r.status != "ok") {
            ++failed;
            std::cerr << "  failed: " << r.run_id << ": " << r.status << "\n";
        }
    }
    write_file(fs::path(out_dir) / "results.csv", results_to_csv(spec, results));
    std::cout << "sweep finished: " << results.size() - failed << " ok, " << failed
              << " failed; results.csv in " << out_dir << "\n";
    return failed == 0 ? 0 : 1;
}

int cmd_plot(const std::string& csv, const std::string& out_dir) {
    const auto files = emit_plots(csv, out_dir);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return 0;
}

int cmd_trace(const std::string& config, std::uint64_t seed, bool seed_set,
              const std::string& out_file) {
    Scenario sc = load_scenario(config);
    if (seed_set) sc.seed = seed;
    const auto histories =
        build_trajectories(sc.seed, sc.area, sc.mobility, sc.n_nodes, sc.horizon);
    write_file(out_file, export_ns2_trace(histories));
    std::cout << "wrote movement trace for " << sc.n_nodes << " nodes over " << sc.horizon
              << " s to " << out_file << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic MANET simulator: OLSR routing under RWP/RD/steady-state "
                 "mobility with CBR/VBR traffic"};
    app.require_subcommand(1);

    std::string config, out_dir = "out", csv, out_file;
    std::uint64_t seed = 0;
    std::string nodes, models, traffics;
    int seeds = 10, jobs = 0;

    auto* run = app.add_subcommand("run", "execute one scenario");
    run->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
    auto* run_seed = run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--out", out_dir, "output directory");

    auto* sweep = app.add_subcommand("sweep", "node-density sweep with seed repetition");
    sweep->add_option("--config", config, "base scenario file")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--nodes", nodes, "counts, e.g. 10..100:10 or 10,20,40");
    sweep->add_option("--models", models, "comma list of rwp,rd,mbgss");
    sweep->add_option("--traffic", traffics, "comma list of cbr,vbr");
    sweep->add_option("--seeds", seeds, "seeds per cell");
    sweep->add_option("--jobs", jobs, "worker threads (1 = serial, 0 = all cores)");
    sweep->add_option("--out", out_dir, "output directory");

    auto* plot = app.add_subcommand("plot", "render figures from a sweep results CSV");
    plot->add_option("--csv", csv, "results.csv path")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", out_dir, "output directory");

    auto* trace = app.add_subcommand("trace", "export the scenario's movement trace");
    trace->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
    auto* trace_seed = trace->add_option("--seed", seed, "override the scenario seed");
    trace->add_option("--out", out_file, "trace output file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config, seed, run_seed->count() > 0, out_dir);
        if (sweep->parsed()) return cmd_sweep(config, nodes, models, traffics, seeds, jobs, out_dir);
        if (plot->parsed()) return cmd_plot(csv, out_dir);
        if (trace->parsed()) return cmd_trace(config, seed, trace_seed->count() > 0, out_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
