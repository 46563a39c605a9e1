// Benchmarks the sweep executor: serial reference vs OpenMP-parallel runs.
// The two paths must produce identical CSV bytes; this also re-checks that.

#include <cstdio>
#include <iostream>

#include <omp.h>

#include "manetsim/sweep.hpp"

using namespace manet;

int main(int argc, char** argv) {
    int seeds = 3;
    double horizon = 120.0;
    if (argc > 1) seeds = std::atoi(argv[1]);
    if (argc > 2) horizon = std::atof(argv[2]);

    SweepSpec spec;
    spec.base.n_nodes = 20;
    spec.base.horizon = horizon;
    spec.base.resolve();
    spec.node_counts = {10, 20};
    spec.seeds_per_cell = seeds;

    std::cout << "sweep benchmark: " << spec.total_runs() << " runs, horizon " << horizon
              << " s, max threads " << omp_get_max_threads() << "\n";

    const double t0 = omp_get_wtime();
    const auto serial = sweep_serial(spec);
    const double t1 = omp_get_wtime();
    const auto parallel = sweep_parallel(spec);
    const double t2 = omp_get_wtime();

    const std::string csv_serial = results_to_csv(spec, serial);
    const std::string csv_parallel = results_to_csv(spec, parallel);

    std::printf("serial   : %8.3f s\n", t1 - t0);
    std::printf("parallel : %8.3f s\n", t2 - t1);
    std::printf("speedup  : %8.2fx\n", (t1 - t0) / (t2 - t1));
    if (csv_serial != csv_parallel) {
        std::cerr << "MISMATCH: parallel sweep diverged from the serial reference\n";
        return 1;
    }
    std::cout << "outputs identical\n";
    return 0;
}
