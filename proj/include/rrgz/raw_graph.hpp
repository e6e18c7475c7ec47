#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace rrgz {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class NodeKind : std::uint8_t { Source, Sink, Ipin, Opin, ChanX, ChanY };
inline constexpr int kNumNodeKinds = 6;

std::string_view to_string(NodeKind kind) noexcept;

struct RRNodeMeta {
    NodeKind kind = NodeKind::Source;
    std::int32_t xlow = 0;
    std::int32_t ylow = 0;
    std::int32_t xhigh = 0;
    std::int32_t yhigh = 0;
    std::int32_t ptc = 0;
    std::int32_t capacity = 1;

    bool operator==(const RRNodeMeta&) const = default;
};

struct Edge {
    NodeId target = 0;
    std::uint16_t switch_id = 0;

    auto operator<=>(const Edge&) const = default;
};

// Uncompressed routing-resource graph: node metadata plus one (target, switch)
// list per node.
struct RawGraph {
    std::vector<RRNodeMeta> metas;
    std::vector<std::vector<Edge>> adjacency;
    std::uint32_t num_switch_types = 1;

    std::size_t num_nodes() const noexcept { return metas.size(); }
    std::size_t num_edges() const noexcept;

    NodeId add_node(const RRNodeMeta& meta);
    void add_edge(NodeId from, NodeId to, std::uint16_t switch_id) {
        adjacency[from].push_back({to, switch_id});
    }

    // Throws ContractError when a target id, switch id or node meta breaks the
    // graph invariants.
    void validate() const;

    // Sorts every list by (target, switch).
    void canonicalize();

    bool operator==(const RawGraph&) const = default;
};

} // namespace rrgz
