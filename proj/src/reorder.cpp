#include "rrgz/reorder.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "rrgz/errors.hpp"
#include "rrgz/netlist.hpp"

namespace rrgz {

namespace {

// Symmetric adjacency without self loops or duplicates, in CSR form.
struct SymGraph {
    std::vector<std::size_t> offsets;
    std::vector<NodeId> nbrs;

    std::size_t degree(NodeId n) const { return offsets[n + 1] - offsets[n]; }
    std::span<const NodeId> of(NodeId n) const {
        return {nbrs.data() + offsets[n], nbrs.data() + offsets[n + 1]};
    }
};

SymGraph symmetrize(const RawGraph& raw) {
    const auto n = raw.num_nodes();
    std::vector<std::vector<NodeId>> lists(n);
    for (NodeId u = 0; u < n; ++u) {
        for (const auto& e : raw.adjacency[u]) {
            if (e.target == u)
                continue;
            lists[u].push_back(e.target);
            lists[e.target].push_back(u);
        }
    }
    SymGraph g;
    g.offsets.assign(n + 1, 0);
    for (NodeId u = 0; u < n; ++u) {
        auto& l = lists[u];
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
        g.offsets[u + 1] = g.offsets[u] + l.size();
    }
    g.nbrs.reserve(g.offsets[n]);
    for (auto& l : lists)
        g.nbrs.insert(g.nbrs.end(), l.begin(), l.end());
    return g;
}

class Bfs {
public:
    explicit Bfs(const SymGraph& g) : g_(g), level_(g.offsets.size() - 1, -1) {}

    // Level structure rooted at `root`; returns the nodes of the last level
    // and writes the eccentricity.
    std::vector<NodeId> last_level(NodeId root, int& eccentricity) {
        for (auto v : touched_)
            level_[v] = -1;
        touched_.clear();
        std::vector<NodeId> frontier{root};
        level_[root] = 0;
        touched_.push_back(root);
        eccentricity = 0;
        while (true) {
            std::vector<NodeId> next;
            for (auto u : frontier) {
                for (auto v : g_.of(u)) {
                    if (level_[v] < 0) {
                        level_[v] = eccentricity + 1;
                        touched_.push_back(v);
                        next.push_back(v);
                    }
                }
            }
            if (next.empty())
                return frontier;
            ++eccentricity;
            frontier = std::move(next);
        }
    }

private:
    const SymGraph& g_;
    std::vector<int> level_;
    std::vector<NodeId> touched_;
};

NodeId min_degree_node(const SymGraph& g, std::span<const NodeId> nodes) {
    return *std::min_element(nodes.begin(), nodes.end(), [&](NodeId a, NodeId b) {
        const auto da = g.degree(a), db = g.degree(b);
        return da != db ? da < db : a < b;
    });
}

NodeId pseudo_peripheral(const SymGraph& g, Bfs& bfs, NodeId start) {
    NodeId root = start;
    int ecc = 0;
    auto last = bfs.last_level(root, ecc);
    while (true) {
        const NodeId cand = min_degree_node(g, last);
        int cand_ecc = 0;
        auto cand_last = bfs.last_level(cand, cand_ecc);
        if (cand_ecc <= ecc)
            return root;
        root = cand;
        ecc = cand_ecc;
        last = std::move(cand_last);
    }
}

} // namespace

Permutation Permutation::identity(std::size_t n) {
    Permutation p;
    p.forward.resize(n);
    std::iota(p.forward.begin(), p.forward.end(), NodeId{0});
    p.inverse = p.forward;
    return p;
}

Permutation Permutation::from_order(std::vector<NodeId> order) {
    Permutation p;
    p.forward.assign(order.size(), kNoNode);
    for (NodeId pos = 0; pos < order.size(); ++pos) {
        const auto old = order[pos];
        if (old >= order.size() || p.forward[old] != kNoNode)
            throw ContractError("order is not a permutation");
        p.forward[old] = pos;
    }
    p.inverse = std::move(order);
    return p;
}

Permutation rcm_order(const RawGraph& raw) {
    const auto n = raw.num_nodes();
    const auto g = symmetrize(raw);
    Bfs bfs(g);
    std::vector<char> placed(n, 0);
    std::vector<NodeId> order;
    order.reserve(n);
    std::vector<NodeId> scratch;

    for (NodeId seed = 0; seed < n; ++seed) {
        if (placed[seed])
            continue;
        const NodeId root = pseudo_peripheral(g, bfs, seed);
        std::size_t head = order.size();
        order.push_back(root);
        placed[root] = 1;
        while (head < order.size()) {
            const NodeId u = order[head++];
            scratch.clear();
            for (auto v : g.of(u)) {
                if (!placed[v]) {
                    placed[v] = 1;
                    scratch.push_back(v);
                }
            }
            std::sort(scratch.begin(), scratch.end(), [&](NodeId a, NodeId b) {
                const auto da = g.degree(a), db = g.degree(b);
                return da != db ? da < db : a < b;
            });
            order.insert(order.end(), scratch.begin(), scratch.end());
        }
    }
    std::reverse(order.begin(), order.end());
    return Permutation::from_order(std::move(order));
}

RawGraph apply_permutation(const RawGraph& raw, const Permutation& p) {
    const auto n = raw.num_nodes();
    if (p.forward.size() != n || p.inverse.size() != n)
        throw ContractError("permutation size " + std::to_string(p.size()) +
                            " does not match graph size " + std::to_string(n));
    RawGraph out;
    out.num_switch_types = raw.num_switch_types;
    out.metas.resize(n);
    out.adjacency.resize(n);
    for (NodeId old = 0; old < n; ++old) {
        const auto nu = p.forward[old];
        out.metas[nu] = raw.metas[old];
        auto& list = out.adjacency[nu];
        list.reserve(raw.adjacency[old].size());
        for (const auto& e : raw.adjacency[old])
            list.push_back({p.forward[e.target], e.switch_id});
        std::sort(list.begin(), list.end());
    }
    return out;
}

Netlist apply_permutation(const Netlist& nets, const Permutation& p) {
    Netlist out = nets;
    for (auto& net : out.nets) {
        if (net.source >= p.size())
            throw ContractError("net " + net.name + " source outside permutation");
        net.source = p.forward[net.source];
        for (auto& s : net.sinks) {
            if (s >= p.size())
                throw ContractError("net " + net.name + " sink outside permutation");
            s = p.forward[s];
        }
    }
    return out;
}

std::uint64_t bandwidth(const RawGraph& raw) {
    std::uint64_t bw = 0;
    for (NodeId u = 0; u < raw.num_nodes(); ++u) {
        for (const auto& e : raw.adjacency[u]) {
            const auto d = e.target > u ? e.target - u : u - e.target;
            bw = std::max<std::uint64_t>(bw, d);
        }
    }
    return bw;
}

double mean_abs_delta(const RawGraph& raw) {
    double sum = 0.0;
    std::uint64_t count = 0;
    for (NodeId u = 0; u < raw.num_nodes(); ++u) {
        for (const auto& e : raw.adjacency[u]) {
            sum += e.target > u ? e.target - u : u - e.target;
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

void write_sparsity(const RawGraph& raw, std::ostream& out) {
    for (NodeId u = 0; u < raw.num_nodes(); ++u) {
        NodeId prev = kNoNode;
        for (const auto& e : raw.adjacency[u]) {
            if (e.target != prev)
                out << u << ' ' << e.target << '\n';
            prev = e.target;
        }
    }
}

} // namespace rrgz
