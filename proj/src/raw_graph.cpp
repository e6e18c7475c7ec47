#include "rrgz/raw_graph.hpp"

#include <algorithm>
#include <string>

#include "rrgz/errors.hpp"

namespace rrgz {

std::string_view to_string(NodeKind kind) noexcept {
    switch (kind) {
    case NodeKind::Source: return "SOURCE";
    case NodeKind::Sink: return "SINK";
    case NodeKind::Ipin: return "IPIN";
    case NodeKind::Opin: return "OPIN";
    case NodeKind::ChanX: return "CHANX";
    case NodeKind::ChanY: return "CHANY";
    }
    return "?";
}

std::size_t RawGraph::num_edges() const noexcept {
    std::size_t n = 0;
    for (const auto& list : adjacency)
        n += list.size();
    return n;
}

NodeId RawGraph::add_node(const RRNodeMeta& meta) {
    metas.push_back(meta);
    adjacency.emplace_back();
    return static_cast<NodeId>(metas.size() - 1);
}

void RawGraph::validate() const {
    if (metas.size() != adjacency.size())
        throw ContractError("node meta and adjacency counts differ");
    if (metas.size() >= kNoNode)
        throw ContractError("too many nodes");
    for (std::size_t i = 0; i < metas.size(); ++i) {
        const auto& m = metas[i];
        const auto where = "node " + std::to_string(i) + ": ";
        if (m.xlow > m.xhigh || m.ylow > m.yhigh)
            throw ContractError(where + "inverted span");
        if (m.capacity < 1)
            throw ContractError(where + "capacity must be >= 1");
        if (m.kind == NodeKind::ChanX && m.ylow != m.yhigh)
            throw ContractError(where + "CHANX spanning in y");
        if (m.kind == NodeKind::ChanY && m.xlow != m.xhigh)
            throw ContractError(where + "CHANY spanning in x");
        for (const auto& e : adjacency[i]) {
            if (e.target >= metas.size())
                throw ContractError(where + "edge target " + std::to_string(e.target) +
                                    " out of range");
            if (e.switch_id >= num_switch_types)
                throw ContractError(where + "switch id " + std::to_string(e.switch_id) +
                                    " >= num_switch_types");
        }
    }
}

void RawGraph::canonicalize() {
    for (auto& list : adjacency)
        std::sort(list.begin(), list.end());
}

} // namespace rrgz
