#pragma once

// Negotiated-congestion detailed router.
//
// Every net is ripped up and rerouted each iteration. A net is grown sink by
// sink with a best-first search seeded from its whole current route tree.
// Entering node n costs
//
//   (base_n + history_n) * (1 + p_fac * max(0, occupancy_n + 1 - capacity_n))
//
// After an iteration with overuse, history_n += h_fac * overuse_n and
// p_fac *= p_fac_mult. Heap ties are broken by node id, so results depend only
// on the inputs. Neighbour expansion goes through an adjacency provider; the
// compressed provider decodes each list into a reusable scratch buffer.

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "rrgz/graphstore.hpp"
#include "rrgz/netlist.hpp"
#include "rrgz/raw_graph.hpp"

namespace rrgz {

struct NeighborView {
    std::span<const NodeId> targets;
    std::span<const std::uint8_t> switches;
};

struct NeighborScratch {
    std::vector<NodeId> targets;
    std::vector<std::uint8_t> switches;
};

// Reads canonical (sorted) lists straight out of CSR arrays.
class FlatProvider {
public:
    static constexpr std::string_view kName = "flat";

    explicit FlatProvider(const RawGraph& raw);

    std::size_t num_nodes() const noexcept { return metas_.size(); }
    std::span<const RRNodeMeta> metas() const noexcept { return metas_; }

    NeighborView neighbors(NodeId node, NeighborScratch&) const noexcept {
        const auto b = offsets_[node], e = offsets_[node + 1];
        return {{targets_.data() + b, e - b}, {switches_.data() + b, e - b}};
    }

private:
    std::vector<RRNodeMeta> metas_;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    std::vector<std::uint8_t> switches_;
};

// Decompresses on every expansion.
class CompressedProvider {
public:
    static constexpr std::string_view kName = "compressed";

    explicit CompressedProvider(const CompressedRRG& g) : g_(g) {}

    std::size_t num_nodes() const noexcept { return g_.num_nodes(); }
    std::span<const RRNodeMeta> metas() const noexcept { return g_.metas(); }

    NeighborView neighbors(NodeId node, NeighborScratch& scratch) const {
        g_.neighbors(node, scratch.targets, scratch.switches);
        return {scratch.targets, scratch.switches};
    }

private:
    const CompressedRRG& g_;
};

struct RouterParams {
    double p_fac_init = 0.5;
    double p_fac_mult = 1.8;
    double h_fac = 1.0;
    int max_iterations = 50;
    bool astar_enabled = true;
    double astar_weight = 1.0;

    // Throws ParameterError.
    void validate() const;
};

double base_cost(NodeKind kind) noexcept;

struct RouteNode {
    NodeId node = kNoNode;
    NodeId parent = kNoNode;  // kNoNode for the tree root (the SOURCE)
    std::uint8_t switch_id = 0;

    bool operator==(const RouteNode&) const = default;
};

// Nodes in the order they joined the tree; parents always precede children.
struct RouteTree {
    std::vector<RouteNode> nodes;

    bool operator==(const RouteTree&) const = default;
};

struct RoutingResult {
    std::vector<RouteTree> trees;  // one per net, netlist order
    int iterations = 0;
    bool legal = false;
    double wall_ms = 0.0;
    std::uint64_t nodes_expanded = 0;
    std::vector<double> p_fac_trace;  // p_fac used in each iteration
    std::vector<int> occupancy;       // final per-node occupancy

    // Equality on everything except wall time.
    bool same_routing(const RoutingResult& other) const;
};

struct IterationState {
    int iteration = 0;
    double p_fac = 0.0;
    std::span<const RouteTree> trees;
    std::span<const int> occupancy;
    std::span<const double> history;
};

// Called after each iteration, before history and p_fac are updated.
using IterationObserver = std::function<void(const IterationState&)>;

// Throws UnroutableError naming the net when a sink cannot be reached and
// ParameterError for invalid parameters or nets. Exhausting max_iterations
// returns a result with legal == false.
RoutingResult route(const FlatProvider& g, const Netlist& nets, const RouterParams& params,
                    const IterationObserver& observer = {});
RoutingResult route(const CompressedProvider& g, const Netlist& nets, const RouterParams& params,
                    const IterationObserver& observer = {});

// FNV-1a over a fixed little-endian serialization of all route trees.
std::uint64_t route_tree_hash(const RoutingResult& r);

} // namespace rrgz
