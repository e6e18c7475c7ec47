#include "bench.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "rrgz/errors.hpp"
#include "rrgz/reorder.hpp"

namespace rrgz::bench {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string environment_note() {
    std::ostringstream ss;
    ss << "synthetic island-style device, desk scale; compiler "
#if defined(__clang__)
       << "clang " << __clang_major__ << "." << __clang_minor__
#elif defined(__GNUC__)
       << "gcc " << __GNUC__ << "." << __GNUC_MINOR__
#else
       << "unknown"
#endif
#ifdef NDEBUG
       << ", optimized build";
#else
       << ", debug build (timings not representative)";
#endif
    return ss.str();
}

} // namespace

const OptionSetReport& BenchReport::set(const std::string& name) const {
    for (const auto& s : memory)
        if (s.name == name)
            return s;
    throw ContractError("no option set named " + name);
}

double median(std::vector<double> v) {
    if (v.empty())
        return 0.0;
    std::sort(v.begin(), v.end());
    const auto mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

BenchReport run_bench(const ArchParams& arch, const BenchOptions& opts) {
    if (opts.repeats < kMinRepeats)
        throw ParameterError("bench needs at least " + std::to_string(kMinRepeats) + " repeats");
    BenchReport r;
    r.arch = arch;
    r.repeats = opts.repeats;
    r.environment = environment_note();

    const auto raw = generate_rrg(arch);
    r.num_nodes = raw.num_nodes();
    r.num_edges = raw.num_edges();

    BuildOptions flat{false, false, opts.window_size, 0, opts.overhead_per_node};
    BuildOptions vbyte{true, false, opts.window_size, 0, opts.overhead_per_node};
    BuildOptions dedup{true, true, opts.window_size, 0, opts.overhead_per_node};
    r.memory.push_back({"flat", flat, false, build(raw, flat).stats()});
    r.memory.push_back({"vbyte", vbyte, false, build(raw, vbyte).stats()});
    const auto compressed = build(raw, dedup);
    r.memory.push_back({"vbyte+dedup", dedup, false, compressed.stats()});

    const auto perm = rcm_order(raw);
    const auto renumbered = apply_permutation(raw, perm);
    r.memory.push_back({"vbyte+dedup+rcm", dedup, true, build(renumbered, dedup).stats()});
    r.bandwidth_before = bandwidth(raw);
    r.bandwidth_after = bandwidth(renumbered);
    r.mean_delta_before = mean_abs_delta(raw);
    r.mean_delta_after = mean_abs_delta(renumbered);

    const auto nets = generate_nets(raw, arch, opts.n_nets, opts.max_fanout);
    r.n_nets = static_cast<int>(nets.size());
    const FlatProvider flat_provider(raw);
    const CompressedProvider compressed_provider(compressed);

    RoutingResult reference;
    r.providers_equivalent = true;
    for (int i = 0; i < opts.repeats; ++i) {
        auto a = route(flat_provider, nets, opts.router);
        auto b = route(compressed_provider, nets, opts.router);
        r.flat_ms.push_back(a.wall_ms);
        r.compressed_ms.push_back(b.wall_ms);
        if (i == 0)
            reference = std::move(a);
        else
            r.providers_equivalent = r.providers_equivalent && a.same_routing(reference);
        r.providers_equivalent = r.providers_equivalent && b.same_routing(reference);
    }
    r.flat_median_ms = median(r.flat_ms);
    r.compressed_median_ms = median(r.compressed_ms);
    r.runtime_ratio = r.flat_median_ms > 0 ? r.compressed_median_ms / r.flat_median_ms : 0.0;
    r.iterations = reference.iterations;
    r.legal = reference.legal;
    r.nodes_expanded = reference.nodes_expanded;
    r.route_hash = route_tree_hash(reference);
    return r;
}

nlohmann::ordered_json stats_json(const MemoryStats& s) {
    nlohmann::ordered_json j;
    j["num_nodes"] = s.num_nodes;
    j["num_edges"] = s.num_edges;
    j["baseline_adjacency_bytes"] = s.baseline_adjacency_bytes;
    j["pool_bytes"] = s.pool_bytes;
    j["index_bytes"] = s.index_bytes;
    j["overhead_per_node"] = s.overhead_per_node;
    j["node_overhead_bytes"] = s.node_overhead_bytes;
    j["referenced_node_count"] = s.referenced_node_count;
    j["adjacency_ratio"] = s.adjacency_ratio;
    j["total_ratio"] = s.total_ratio;
    j["index_charged"] = true;
    return j;
}

nlohmann::ordered_json to_json(const BenchReport& r) {
    nlohmann::ordered_json j;
    j["arch"] = nlohmann::ordered_json::parse(arch_params_to_json(r.arch));
    j["num_nodes"] = r.num_nodes;
    j["num_edges"] = r.num_edges;
    auto& mem = j["memory"];
    mem = nlohmann::ordered_json::array();
    for (const auto& s : r.memory) {
        auto e = stats_json(s.stats);
        e["option_set"] = s.name;
        mem.push_back(e);
    }
    j["rcm"] = {{"bandwidth_before", r.bandwidth_before},
                {"bandwidth_after", r.bandwidth_after},
                {"mean_abs_delta_before", r.mean_delta_before},
                {"mean_abs_delta_after", r.mean_delta_after},
                {"start_rule", "pseudo-peripheral (repeated farthest-node BFS)"}};
    j["routing"] = {{"n_nets", r.n_nets},
                    {"repeats", r.repeats},
                    {"flat_ms", r.flat_ms},
                    {"compressed_ms", r.compressed_ms},
                    {"flat_median_ms", r.flat_median_ms},
                    {"compressed_median_ms", r.compressed_median_ms},
                    {"runtime_ratio", r.runtime_ratio},
                    {"providers_equivalent", r.providers_equivalent},
                    {"iterations", r.iterations},
                    {"legal", r.legal},
                    {"nodes_expanded", r.nodes_expanded},
                    {"route_tree_hash", hex64(r.route_hash)}};
    j["reference_bands"] = {
        {"total_ratio_all_options", "2.9-3.6 (homogeneous, W=150), 1.65-1.73 (heterogeneous)"},
        {"adjacency_ratio_all_options", "7.8-27.0 (homogeneous, W=150)"},
        {"total_ratio_vbyte_only", "1.8-1.9 (homogeneous), 1.58-1.62 (heterogeneous)"},
        {"runtime_ratio_min_max_avg", "1.08/1.20/1.14 (homogeneous), 1.12/1.25/1.20 (heterogeneous)"}};
    j["environment"] = r.environment;
    return j;
}

std::string to_text(const BenchReport& r) {
    std::ostringstream ss;
    char line[256];
    ss << "device " << r.arch.grid_w << "x" << r.arch.grid_h << " W=" << r.arch.channel_width
       << " L=" << r.arch.seg_len << " hetero_columns=" << r.arch.hetero_columns.size() << ": "
       << r.num_nodes << " nodes, " << r.num_edges << " edges\n";
    ss << "option set          pool B     adj ratio  total ratio  referenced\n";
    for (const auto& s : r.memory) {
        std::snprintf(line, sizeof line, "%-18s %10llu %10.3f %12.3f %11llu\n", s.name.c_str(),
                      static_cast<unsigned long long>(s.stats.pool_bytes), s.stats.adjacency_ratio,
                      s.stats.total_ratio,
                      static_cast<unsigned long long>(s.stats.referenced_node_count));
        ss << line;
    }
    std::snprintf(line, sizeof line,
                  "rcm: bandwidth %llu -> %llu, mean |delta| %.1f -> %.1f\n",
                  static_cast<unsigned long long>(r.bandwidth_before),
                  static_cast<unsigned long long>(r.bandwidth_after), r.mean_delta_before,
                  r.mean_delta_after);
    ss << line;
    std::snprintf(line, sizeof line,
                  "routing %d nets: %d iterations, legal=%s, flat %.1f ms, compressed %.1f ms "
                  "(median of %d), ratio %.3f, equivalent=%s\n",
                  r.n_nets, r.iterations, r.legal ? "yes" : "no", r.flat_median_ms,
                  r.compressed_median_ms, r.repeats, r.runtime_ratio,
                  r.providers_equivalent ? "yes" : "no");
    ss << line;
    ss << "reference: total 2.9-3.6x, adjacency 7.8-27.0x, vbyte-only 1.8-1.9x; runtime ratio "
          "1.08/1.20/1.14 (homog), 1.12/1.25/1.20 (hetero)\n";
    ss << r.environment << '\n';
    return ss.str();
}

} // namespace rrgz::bench
