#pragma once

#include <string>
#include <vector>

namespace manet {

/// Render the figure set from a results CSV: one line chart per
/// (metric, traffic) pair present in the data — delay_<traffic>.svg,
/// throughput_<traffic>.svg, pdr_<traffic>.svg — node count on the x axis,
/// one series per mobility model, error bars from the per-cell stddev rows.
/// Returns the emitted file paths.
std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& out_dir);

}  // namespace manet
