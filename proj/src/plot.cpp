#include "manetsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "manetsim/sweep.hpp"

namespace manet {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

struct CellStat {
    double mean = 0;
    double stddev = 0;
    bool has_mean = false;
};

struct MetricSpec {
    const char* key;            // file stem prefix
    const char* title;          // y-axis label
    int column;                 // column in the results CSV
};

constexpr MetricSpec kMetrics[] = {
    {"delay", "End-to-End Delay (s)", 6},
    {"throughput", "Throughput (bits/s)", 7},
    {"pdr", "Packet Delivery Ratio", 8},
};

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt_tick(double v) {
    char buf[32];
    if (std::fabs(v) >= 1e5 || (v != 0 && std::fabs(v) < 1e-3))
        std::snprintf(buf, sizeof buf, "%.2g", v);
    else
        std::snprintf(buf, sizeof buf, "%g", std::round(v * 1000.0) / 1000.0);
    return buf;
}

}  // namespace

std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& out_dir) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open results csv: " + csv_path);

    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("results csv is empty");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    const auto expected = split_csv_line(kResultsCsvHeader);
    const auto actual = split_csv_line(header);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i >= actual.size() || actual[i] != expected[i])
            throw std::runtime_error("results csv schema mismatch at column '" + expected[i] +
                                     "'");
    }

    // (traffic, model, n_nodes, metric) -> stat, collected from aggregate rows
    std::map<std::string, std::map<std::string, std::map<int, std::map<int, CellStat>>>> cells;
    std::set<int> node_counts;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < expected.size())
            throw std::runtime_error("results csv row has too few columns: " + line);
        const std::string& status = fields[13];
        if (status != "mean" && status != "stddev") continue;
        const std::string& model = fields[1];
        const std::string& traffic = fields[2];
        const int n = std::stoi(fields[3]);
        node_counts.insert(n);
        for (const auto& metric : kMetrics) {
            const std::string& value = fields[static_cast<std::size_t>(metric.column)];
            if (value.empty()) continue;
            CellStat& stat = cells[traffic][model][n][metric.column];
            if (status == "mean") {
                stat.mean = std::stod(value);
                stat.has_mean = true;
            } else {
                stat.stddev = std::stod(value);
            }
        }
    }
    if (cells.empty())
        throw std::runtime_error("results csv contains no aggregate rows to plot");

    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;

    const double width = 640, height = 440;
    const double ml = 80, mr = 24, mt = 48, mb = 56;
    const double pw = width - ml - mr, ph = height - mt - mb;

    for (const auto& [traffic, by_model] : cells) {
        for (const auto& metric : kMetrics) {
            // collect series points
            struct Point {
                int n;
                double mean, stddev;
            };
            std::map<std::string, std::vector<Point>> series;
            double ymax = 0;
            for (const auto& [model, by_n] : by_model) {
                for (const auto& [n, by_metric] : by_n) {
                    auto it = by_metric.find(metric.column);
                    if (it == by_metric.end() || !it->second.has_mean) continue;
                    series[model].push_back({n, it->second.mean, it->second.stddev});
                    ymax = std::max(ymax, it->second.mean + it->second.stddev);
                }
            }
            if (series.empty()) continue;
            if (ymax <= 0) ymax = 1;
            ymax *= 1.08;

            const int xmin = *node_counts.begin();
            const int xmax = *node_counts.rbegin();
            const double xspan = xmax > xmin ? xmax - xmin : 1;
            auto sx = [&](double n) { return ml + (n - xmin) / xspan * pw; };
            auto sy = [&](double v) { return mt + ph - v / ymax * ph; };

            std::ostringstream svg;
            svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
                << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
                << "\">\n";
            svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
            std::string traffic_uc = traffic;
            std::transform(traffic_uc.begin(), traffic_uc.end(), traffic_uc.begin(), ::toupper);
            svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
                << "font-family=\"sans-serif\" font-size=\"15\">" << metric.title
                << " vs. No. of Nodes (" << traffic_uc << ")</text>\n";

            // axes
            svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
                << mt + ph << "\" stroke=\"black\"/>\n";
            svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
                << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
            for (int n : node_counts) {
                svg << "<line x1=\"" << sx(n) << "\" y1=\"" << mt + ph << "\" x2=\"" << sx(n)
                    << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"black\"/>\n";
                svg << "<text x=\"" << sx(n) << "\" y=\"" << mt + ph + 18
                    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
                    << n << "</text>\n";
            }
            for (int i = 0; i <= 5; ++i) {
                const double v = ymax * i / 5.0;
                svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << sy(v) << "\" x2=\"" << ml
                    << "\" y2=\"" << sy(v) << "\" stroke=\"black\"/>\n";
                svg << "<text x=\"" << ml - 8 << "\" y=\"" << sy(v) + 4
                    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
                    << fmt_tick(v) << "</text>\n";
            }
            svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 14
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
                << "No. of Nodes</text>\n";
            svg << "<text x=\"18\" y=\"" << mt + ph / 2
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
                << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << metric.title
                << "</text>\n";

            // series with error bars
            int color_idx = 0;
            double legend_y = mt + 8;
            for (auto& [model, points] : series) {
                std::sort(points.begin(), points.end(),
                          [](const Point& a, const Point& b) { return a.n < b.n; });
                const std::string color =
                    kSeriesColors[color_idx++ % (sizeof kSeriesColors / sizeof *kSeriesColors)];
                std::ostringstream poly;
                for (const auto& p : points) poly << sx(p.n) << "," << sy(p.mean) << " ";
                svg << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.5\" points=\"" << poly.str() << "\"/>\n";
                for (const auto& p : points) {
                    if (p.stddev > 0) {
                        const double lo = std::max(0.0, p.mean - p.stddev);
                        const double hi = std::min(ymax, p.mean + p.stddev);
                        svg << "<line x1=\"" << sx(p.n) << "\" y1=\"" << sy(lo) << "\" x2=\""
                            << sx(p.n) << "\" y2=\"" << sy(hi) << "\" stroke=\"" << color
                            << "\"/>\n";
                        svg << "<line x1=\"" << sx(p.n) - 3 << "\" y1=\"" << sy(lo) << "\" x2=\""
                            << sx(p.n) + 3 << "\" y2=\"" << sy(lo) << "\" stroke=\"" << color
                            << "\"/>\n";
                        svg << "<line x1=\"" << sx(p.n) - 3 << "\" y1=\"" << sy(hi) << "\" x2=\""
                            << sx(p.n) + 3 << "\" y2=\"" << sy(hi) << "\" stroke=\"" << color
                            << "\"/>\n";
                    }
                    svg << "<circle cx=\"" << sx(p.n) << "\" cy=\"" << sy(p.mean)
                        << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
                }
                svg << "<line x1=\"" << ml + pw - 120 << "\" y1=\"" << legend_y << "\" x2=\""
                    << ml + pw - 96 << "\" y2=\"" << legend_y << "\" stroke=\"" << color
                    << "\" stroke-width=\"1.5\"/>\n";
                svg << "<text x=\"" << ml + pw - 90 << "\" y=\"" << legend_y + 4
                    << "\" font-family=\"sans-serif\" font-size=\"11\">" << model << "</text>\n";
                legend_y += 16;
            }
            svg << "</svg>\n";

            const std::string path =
                (std::filesystem::path(out_dir) / (std::string(metric.key) + "_" + traffic +
                                                   ".svg"))
                    .string();
            std::ofstream out(path);
            if (!out) throw std::runtime_error("cannot write plot file: " + path);
            out << svg.str();
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace manet
