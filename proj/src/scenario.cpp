#include "manetsim/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace manet {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

struct KeyValue {
    std::string value;
    int line;
};

double parse_double(const std::string& key, const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(kv.line) + ": key '" + key +
                                    "': not a number: '" + kv.value + "'");
    }
}

long long parse_int(const std::string& key, const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(kv.line) + ": key '" + key +
                                    "': not an integer: '" + kv.value + "'");
    }
}

}  // namespace

void Scenario::resolve() {
    if (!n_sources_explicit) n_sources = std::min(40, n_nodes / 2);
    if (!rate_factor_explicit) vbr.rate_factor = n_sources >= 40 ? 0.33 : 0.25;
    if (!snr_ref_explicit) link.snr_ref = link.tx_range;
}

void Scenario::validate() const {
    if (n_nodes < 2) throw std::invalid_argument("n_nodes must be >= 2");
    if (!(horizon > 0)) throw std::invalid_argument("horizon_s must be > 0");
    if (ttl < 1) throw std::invalid_argument("ttl must be >= 1");
    if (n_sources < 0) throw std::invalid_argument("scenario not resolved (n_sources)");
    if (2 * n_sources > n_nodes)
        throw std::invalid_argument("n_sources must be <= n_nodes/2 (disjoint pairs)");
    area.validate();
    mobility.validate();
    link.validate();
    olsr.validate();
    cbr.validate();
    vbr.validate();
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    std::map<std::string, KeyValue> kvs;
    {
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(origin + ": line " + std::to_string(line_no) +
                                            ": expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty())
                throw std::invalid_argument(origin + ": line " + std::to_string(line_no) +
                                            ": empty key or value");
            if (kvs.count(key))
                throw std::invalid_argument(origin + ": line " + std::to_string(line_no) +
                                            ": duplicate key '" + key + "'");
            kvs[key] = {value, line_no};
        }
    }

    Scenario sc;
    auto take = [&](const char* key) -> const KeyValue* {
        auto it = kvs.find(key);
        if (it == kvs.end()) return nullptr;
        return &it->second;
    };
    std::map<std::string, bool> known;
    auto num = [&](const char* key, double& out) {
        known[key] = true;
        if (const KeyValue* kv = take(key)) out = parse_double(key, *kv);
    };
    auto integer = [&](const char* key, auto& out) {
        known[key] = true;
        if (const KeyValue* kv = take(key))
            out = static_cast<std::remove_reference_t<decltype(out)>>(parse_int(key, *kv));
    };
    auto text_key = [&](const char* key, std::string& out) {
        known[key] = true;
        if (const KeyValue* kv = take(key)) out = kv->value;
    };

    integer("n_nodes", sc.n_nodes);
    num("horizon_s", sc.horizon);
    integer("seed", sc.seed);
    num("area_width_m", sc.area.width);
    num("area_height_m", sc.area.height);

    std::string mobility_name = "rwp";
    text_key("mobility", mobility_name);
    sc.mobility.model = mobility_model_from_string(mobility_name);
    num("v_min_mps", sc.mobility.v_min);
    num("v_max_mps", sc.mobility.v_max);
    num("pause_s", sc.mobility.pause);

    num("tx_range_m", sc.link.tx_range);
    num("bitrate_bps", sc.link.bitrate);
    num("header_bytes", sc.link.header_bytes);
    known["snr_ref_m"] = true;
    if (const KeyValue* kv = take("snr_ref_m")) {
        sc.link.snr_ref = parse_double("snr_ref_m", *kv);
        sc.snr_ref_explicit = true;
    }
    std::string curve_name = "step";
    text_key("success_curve", curve_name);
    sc.link.curve = success_curve_from_string(curve_name);
    num("success_threshold", sc.link.step_threshold);
    num("success_k", sc.link.exp_k);
    integer("queue_len", sc.link.queue_len);

    num("hello_interval_s", sc.olsr.hello_interval);
    num("tc_interval_s", sc.olsr.tc_interval);
    num("neighbor_hold_s", sc.olsr.neighbor_hold);
    num("topology_hold_s", sc.olsr.topology_hold);
    num("jitter_s", sc.olsr.jitter);

    std::string traffic_name = "cbr";
    text_key("traffic", traffic_name);
    sc.traffic = traffic_kind_from_string(traffic_name);
    num("cbr_rate_pps", sc.cbr.rate_pps);
    num("cbr_size_bytes", sc.cbr.packet_bytes);
    num("vbr_seed", sc.vbr.initial_seed);
    known["vbr_rate_factor"] = true;
    if (const KeyValue* kv = take("vbr_rate_factor")) {
        sc.vbr.rate_factor = parse_double("vbr_rate_factor", *kv);
        sc.rate_factor_explicit = true;
    }
    num("vbr_fps", sc.vbr.fps);
    text_key("vbr_gop", sc.vbr.gop_pattern);
    num("mtu_bytes", sc.vbr.mtu_bytes);
    known["n_sources"] = true;
    if (const KeyValue* kv = take("n_sources")) {
        sc.n_sources = static_cast<int>(parse_int("n_sources", *kv));
        sc.n_sources_explicit = true;
    }
    integer("ttl", sc.ttl);

    for (const auto& [key, kv] : kvs) {
        if (!known.count(key))
            throw std::invalid_argument(origin + ": line " + std::to_string(kv.line) +
                                        ": unknown key '" + key + "'");
    }
    if (!kvs.count("n_nodes"))
        throw std::invalid_argument(origin + ": mandatory key 'n_nodes' is missing");

    // mobility coordinates are generated at trace precision
    sc.area.width = snap6(sc.area.width);
    sc.area.height = snap6(sc.area.height);

    sc.resolve();
    sc.validate();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

std::string scenario_to_text(const Scenario& sc) {
    std::ostringstream out;
    out << "# resolved scenario\n";
    out << "n_nodes = " << sc.n_nodes << "\n";
    out << "horizon_s = " << fmt_num(sc.horizon) << "\n";
    out << "seed = " << sc.seed << "\n";
    out << "area_width_m = " << fmt_num(sc.area.width) << "\n";
    out << "area_height_m = " << fmt_num(sc.area.height) << "\n";
    out << "mobility = " << to_string(sc.mobility.model) << "\n";
    out << "v_min_mps = " << fmt_num(sc.mobility.v_min) << "\n";
    out << "v_max_mps = " << fmt_num(sc.mobility.v_max) << "\n";
    out << "pause_s = " << fmt_num(sc.mobility.pause) << "\n";
    out << "tx_range_m = " << fmt_num(sc.link.tx_range) << "\n";
    out << "bitrate_bps = " << fmt_num(sc.link.bitrate) << "\n";
    out << "header_bytes = " << fmt_num(sc.link.header_bytes) << "\n";
    out << "snr_ref_m = " << fmt_num(sc.link.snr_ref) << "\n";
    out << "success_curve = " << to_string(sc.link.curve) << "\n";
    out << "success_threshold = " << fmt_num(sc.link.step_threshold) << "\n";
    out << "success_k = " << fmt_num(sc.link.exp_k) << "\n";
    out << "queue_len = " << sc.link.queue_len << "\n";
    out << "hello_interval_s = " << fmt_num(sc.olsr.hello_interval) << "\n";
    out << "tc_interval_s = " << fmt_num(sc.olsr.tc_interval) << "\n";
    out << "neighbor_hold_s = " << fmt_num(sc.olsr.neighbor_hold) << "\n";
    out << "topology_hold_s = " << fmt_num(sc.olsr.topology_hold) << "\n";
    out << "jitter_s = " << fmt_num(sc.olsr.jitter) << "\n";
    out << "traffic = " << to_string(sc.traffic) << "\n";
    out << "cbr_rate_pps = " << fmt_num(sc.cbr.rate_pps) << "\n";
    out << "cbr_size_bytes = " << fmt_num(sc.cbr.packet_bytes) << "\n";
    out << "vbr_seed = " << fmt_num(sc.vbr.initial_seed) << "\n";
    out << "vbr_rate_factor = " << fmt_num(sc.vbr.rate_factor) << "\n";
    out << "vbr_fps = " << fmt_num(sc.vbr.fps) << "\n";
    out << "vbr_gop = " << sc.vbr.gop_pattern << "\n";
    out << "mtu_bytes = " << fmt_num(sc.vbr.mtu_bytes) << "\n";
    out << "n_sources = " << sc.n_sources << "\n";
    out << "ttl = " << sc.ttl << "\n";
    return out.str();
}

std::uint64_t Scenario::fingerprint() const {
    return RngStream::fnv1a64(scenario_to_text(*this));
}

}  // namespace manet
