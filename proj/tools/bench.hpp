#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rrgz/archgen.hpp"
#include "rrgz/graphstore.hpp"
#include "rrgz/router.hpp"

namespace rrgz::bench {

inline constexpr int kMinRepeats = 5;

struct BenchOptions {
    int repeats = kMinRepeats;
    int n_nets = 400;
    int max_fanout = 4;
    std::uint32_t window_size = 0;
    std::uint32_t overhead_per_node = 24;
    RouterParams router;
};

struct OptionSetReport {
    std::string name;
    BuildOptions options;
    bool rcm = false;
    MemoryStats stats;
};

struct BenchReport {
    ArchParams arch;
    std::uint64_t num_nodes = 0;
    std::uint64_t num_edges = 0;
    std::vector<OptionSetReport> memory;  // flat, vbyte-only, vbyte+dedup, vbyte+dedup+rcm
    std::uint64_t bandwidth_before = 0;
    std::uint64_t bandwidth_after = 0;
    double mean_delta_before = 0.0;
    double mean_delta_after = 0.0;

    int n_nets = 0;
    int repeats = 0;
    std::vector<double> flat_ms;
    std::vector<double> compressed_ms;
    double flat_median_ms = 0.0;
    double compressed_median_ms = 0.0;
    double runtime_ratio = 0.0;
    bool providers_equivalent = false;
    int iterations = 0;
    bool legal = false;
    std::uint64_t nodes_expanded = 0;
    std::uint64_t route_hash = 0;
    std::string environment;

    const OptionSetReport& set(const std::string& name) const;
};

double median(std::vector<double> v);

// Runs the full ablation: builds every option set, then routes the same
// seeded netlist `repeats` times through each provider (alternating).
// Throws ParameterError when repeats < kMinRepeats.
BenchReport run_bench(const ArchParams& arch, const BenchOptions& opts);

nlohmann::ordered_json stats_json(const MemoryStats& s);
nlohmann::ordered_json to_json(const BenchReport& r);
std::string to_text(const BenchReport& r);

} // namespace rrgz::bench
