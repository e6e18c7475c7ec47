#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "bench.hpp"
#include "json.hpp"
#include "rrgz/archgen.hpp"
#include "rrgz/errors.hpp"
#include "rrgz/graphstore.hpp"
#include "rrgz/netlist.hpp"
#include "rrgz/reorder.hpp"
#include "rrgz/router.hpp"

namespace rrgz::cli {

namespace {

struct ArchArgs {
    std::string config;
    std::string preset = "homogeneous";
    std::optional<std::uint64_t> seed;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", config, "Architecture JSON config");
        cmd->add_option("--preset", preset, "Built-in architecture when no config is given")
            ->check(CLI::IsMember({"homogeneous", "heterogeneous"}));
        cmd->add_option("--seed", seed, "RNG seed (falls back to RRGZIP_SEED, then the config)");
    }

    ArchParams resolve() const {
        ArchParams p = !config.empty()           ? load_arch_params(config)
                       : preset == "heterogeneous" ? heterogeneous_default()
                                                   : homogeneous_default();
        if (seed) {
            p.seed = *seed;
        } else if (const char* env = std::getenv("RRGZIP_SEED"); env && *env) {
            try {
                p.seed = std::stoull(env);
            } catch (const std::exception&) {
                throw ParameterError(std::string("RRGZIP_SEED is not an integer: ") + env);
            }
        }
        return p;
    }
};

void add_router_flags(CLI::App* cmd, RouterParams& rp, bool& no_astar) {
    cmd->add_option("--p-fac-init", rp.p_fac_init, "Initial present-congestion factor");
    cmd->add_option("--p-fac-mult", rp.p_fac_mult, "Present-congestion growth per iteration");
    cmd->add_option("--h-fac", rp.h_fac, "History cost increment per unit of overuse");
    cmd->add_option("--max-iterations", rp.max_iterations, "Rip-up and reroute iteration cap");
    cmd->add_option("--astar-weight", rp.astar_weight, "Scale of the A* distance estimate");
    cmd->add_flag("--no-astar", no_astar, "Plain cost-ordered search");
}

std::string hex64(std::uint64_t v) {
    std::ostringstream ss;
    ss << std::hex;
    ss.width(16);
    ss.fill('0');
    ss << v;
    return ss.str();
}

void print_stats(std::ostream& out, const MemoryStats& s, bool json) {
    if (json) {
        out << bench::stats_json(s).dump(2) << '\n';
        return;
    }
    out << "nodes " << s.num_nodes << ", edges " << s.num_edges << '\n'
        << "baseline adjacency bytes " << s.baseline_adjacency_bytes << '\n'
        << "pool bytes " << s.pool_bytes << ", index bytes " << s.index_bytes
        << " (index charged to the compressed side)\n"
        << "node overhead bytes " << s.node_overhead_bytes << " (" << s.overhead_per_node
        << " per node)\n"
        << "referenced nodes " << s.referenced_node_count << '\n'
        << "adjacency ratio " << s.adjacency_ratio << ", total ratio " << s.total_ratio << '\n';
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Routing-resource-graph compression toolkit"};
    app.require_subcommand(1);

    // generate
    ArchArgs gen_arch;
    std::string gen_out, gen_nets;
    int gen_n_nets = 400, gen_fanout = 4;
    auto* gen = app.add_subcommand("generate", "Generate a synthetic device graph (flat RRGZ)");
    gen_arch.add_to(gen);
    gen->add_option("--out", gen_out, "Output RRGZ file")->required();
    gen->add_option("--nets", gen_nets, "Also write a seeded netlist here");
    gen->add_option("--n-nets", gen_n_nets, "Number of nets")->check(CLI::PositiveNumber);
    gen->add_option("--max-fanout", gen_fanout, "Maximum sinks per net")->check(CLI::PositiveNumber);

    // compress
    std::string comp_in, comp_out, comp_nets_in, comp_nets_out;
    std::uint32_t comp_window = 0, comp_overhead = 24, comp_min_tail = 0;
    bool comp_no_dedup = false, comp_no_vbyte = false, comp_rcm = false, comp_json = false;
    auto* comp = app.add_subcommand("compress", "Rebuild a graph with the chosen options");
    comp->add_option("--in", comp_in, "Input RRGZ file")->required();
    comp->add_option("--out", comp_out, "Output RRGZ file")->required();
    comp->add_option("--window", comp_window, "Dedup pattern-table capacity (0 = unbounded)");
    comp->add_option("--min-tail", comp_min_tail, "Minimum tail deltas for dedup");
    comp->add_flag("--no-dedup", comp_no_dedup, "Disable sliding-window dedup");
    comp->add_flag("--no-vbyte", comp_no_vbyte, "Flat 6-byte-per-edge layout (implies --no-dedup)");
    comp->add_flag("--rcm", comp_rcm, "Renumber nodes with reverse Cuthill-McKee first");
    comp->add_option("--overhead-bytes", comp_overhead, "Per-node non-adjacency bytes");
    comp->add_option("--nets", comp_nets_in, "Netlist to relabel alongside --rcm");
    comp->add_option("--nets-out", comp_nets_out, "Where to write the relabelled netlist");
    comp->add_flag("--json", comp_json, "Print stats as JSON");

    // stats
    std::string stats_in;
    bool stats_as_json = false;
    auto* st = app.add_subcommand("stats", "Print memory accounting of an RRGZ file");
    st->add_option("--in", stats_in, "RRGZ file")->required();
    st->add_flag("--json", stats_as_json, "JSON output");

    // route
    std::string route_graph, route_nets, route_provider = "compressed";
    bool route_json = false, route_no_astar = false;
    RouterParams route_params;
    auto* rt = app.add_subcommand("route", "Route a netlist on a graph");
    rt->add_option("--graph", route_graph, "RRGZ file")->required();
    rt->add_option("--nets", route_nets, "Netlist file")->required();
    rt->add_option("--provider", route_provider, "Adjacency provider")
        ->check(CLI::IsMember({"flat", "compressed"}));
    rt->add_flag("--json", route_json, "JSON output");
    add_router_flags(rt, route_params, route_no_astar);

    // bench
    ArchArgs bench_arch;
    bench::BenchOptions bench_opts;
    bool bench_json = false, bench_no_astar = false;
    std::string bench_out;
    auto* bn = app.add_subcommand("bench", "Run the compression and routing ablation");
    bench_arch.add_to(bn);
    bn->add_option("--repeats", bench_opts.repeats, "Timed routing repetitions per provider (>= 5)");
    bn->add_option("--n-nets", bench_opts.n_nets, "Number of nets")->check(CLI::PositiveNumber);
    bn->add_option("--max-fanout", bench_opts.max_fanout, "Maximum sinks per net")
        ->check(CLI::PositiveNumber);
    bn->add_option("--window", bench_opts.window_size, "Dedup pattern-table capacity");
    bn->add_option("--overhead-bytes", bench_opts.overhead_per_node, "Per-node non-adjacency bytes");
    bn->add_flag("--json", bench_json, "JSON report");
    bn->add_option("--out", bench_out, "Also write the JSON report to this file");
    add_router_flags(bn, bench_opts.router, bench_no_astar);

    // dump-matrix
    std::string dm_in, dm_out;
    auto* dm = app.add_subcommand("dump-matrix", "Write adjacency sparsity pattern as 'row col' lines");
    dm->add_option("--in", dm_in, "RRGZ file")->required();
    dm->add_option("--out", dm_out, "Output text file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParameterError;
    }

    try {
        if (gen->parsed()) {
            const auto p = gen_arch.resolve();
            const auto raw = generate_rrg(p);
            dump(build(raw, {false, false, 0, 0, 24}), gen_out);
            out << "wrote " << gen_out << ": " << raw.num_nodes() << " nodes, " << raw.num_edges()
                << " edges\n";
            if (!gen_nets.empty()) {
                const auto nets = generate_nets(raw, p, gen_n_nets, gen_fanout);
                save_netlist(nets, gen_nets);
                out << "wrote " << gen_nets << ": " << nets.size() << " nets\n";
            }
        } else if (comp->parsed()) {
            auto raw = load(comp_in).to_raw();
            if (comp_rcm) {
                const auto perm = rcm_order(raw);
                raw = apply_permutation(raw, perm);
                if (!comp_nets_in.empty()) {
                    if (comp_nets_out.empty())
                        throw ParameterError("--nets needs --nets-out");
                    save_netlist(apply_permutation(load_netlist(comp_nets_in), perm), comp_nets_out);
                }
            } else if (!comp_nets_in.empty()) {
                throw ParameterError("--nets is only meaningful with --rcm");
            }
            BuildOptions o;
            o.enable_vbyte = !comp_no_vbyte;
            o.enable_dedup = !comp_no_vbyte && !comp_no_dedup;
            o.window_size = comp_window;
            o.min_tail_len = comp_min_tail;
            o.overhead_per_node = comp_overhead;
            const auto g = build(raw, o);
            dump(g, comp_out);
            print_stats(out, g.stats(), comp_json);
        } else if (st->parsed()) {
            print_stats(out, load(stats_in).stats(), stats_as_json);
        } else if (rt->parsed()) {
            route_params.astar_enabled = !route_no_astar;
            const auto g = load(route_graph);
            const auto nets = load_netlist(route_nets);
            RoutingResult r;
            if (route_provider == "flat")
                r = route(FlatProvider(g.to_raw()), nets, route_params);
            else
                r = route(CompressedProvider(g), nets, route_params);
            const auto hash = hex64(route_tree_hash(r));
            if (route_json) {
                nlohmann::ordered_json j;
                j["iterations"] = r.iterations;
                j["legal"] = r.legal;
                j["wall_ms"] = r.wall_ms;
                j["nodes_expanded"] = r.nodes_expanded;
                j["provider"] = route_provider;
                j["route_tree_hash"] = hash;
                j["nets"] = nets.size();
                out << j.dump(2) << '\n';
            } else {
                out << "provider " << route_provider << ": " << r.iterations << " iterations, legal "
                    << (r.legal ? "yes" : "no") << ", " << r.wall_ms << " ms, " << r.nodes_expanded
                    << " nodes expanded, route tree hash " << hash << '\n';
            }
            if (!r.legal) {
                err << "error: routing did not converge within " << route_params.max_iterations
                    << " iterations\n";
                return kRoutingFailure;
            }
        } else if (bn->parsed()) {
            bench_opts.router.astar_enabled = !bench_no_astar;
            const auto report = bench::run_bench(bench_arch.resolve(), bench_opts);
            const auto j = bench::to_json(report);
            if (bench_json)
                out << j.dump(2) << '\n';
            else
                out << bench::to_text(report);
            if (!bench_out.empty()) {
                std::ofstream f(bench_out);
                if (!f)
                    throw ParameterError("cannot open " + bench_out);
                f << j.dump(2) << '\n';
            }
            if (!report.legal)
                return kRoutingFailure;
        } else if (dm->parsed()) {
            const auto raw = load(dm_in).to_raw();
            std::ofstream f(dm_out);
            if (!f)
                throw ParameterError("cannot open " + dm_out);
            write_sparsity(raw, f);
            out << "wrote " << dm_out << '\n';
        }
    } catch (const UnroutableError& e) {
        err << "error: unroutable: " << e.what() << '\n';
        return kRoutingFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kParameterError;
    }
    return kOk;
}

} // namespace rrgz::cli
