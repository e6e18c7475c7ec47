#include "rrgz/router.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "rrgz/errors.hpp"

namespace rrgz {

FlatProvider::FlatProvider(const RawGraph& raw) : metas_(raw.metas) {
    if (raw.num_switch_types > codec::kMaxSwitchTypes)
        throw SwitchOverflowError("flat provider stores one-octet switch ids");
    offsets_.reserve(raw.num_nodes() + 1);
    offsets_.push_back(0);
    targets_.reserve(raw.num_edges());
    switches_.reserve(raw.num_edges());
    std::vector<Edge> sorted;
    for (const auto& list : raw.adjacency) {
        sorted = list;
        std::sort(sorted.begin(), sorted.end());
        for (const auto& e : sorted) {
            targets_.push_back(e.target);
            switches_.push_back(static_cast<std::uint8_t>(e.switch_id));
        }
        offsets_.push_back(targets_.size());
    }
}

void RouterParams::validate() const {
    if (!(p_fac_mult > 1.0))
        throw ParameterError("p_fac_mult must be > 1");
    if (max_iterations < 1)
        throw ParameterError("max_iterations must be >= 1");
    if (!(p_fac_init >= 0.0) || !(h_fac >= 0.0) || !(astar_weight >= 0.0))
        throw ParameterError("router factors must be non-negative");
}

double base_cost(NodeKind kind) noexcept {
    switch (kind) {
    case NodeKind::Sink: return 0.5;
    case NodeKind::Ipin: return 0.95;
    default: return 1.0;
    }
}

bool RoutingResult::same_routing(const RoutingResult& o) const {
    return trees == o.trees && iterations == o.iterations && legal == o.legal &&
           nodes_expanded == o.nodes_expanded && p_fac_trace == o.p_fac_trace &&
           occupancy == o.occupancy;
}

std::uint64_t route_tree_hash(const RoutingResult& r) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&](std::uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) {
            h ^= (v >> (8 * i)) & 0xFF;
            h *= 0x100000001b3ull;
        }
    };
    mix(r.trees.size(), 4);
    for (const auto& t : r.trees) {
        mix(t.nodes.size(), 4);
        for (const auto& n : t.nodes) {
            mix(n.node, 4);
            mix(n.parent, 4);
            mix(n.switch_id, 1);
        }
    }
    return h;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct HeapEntry {
    double f;
    double g;
    NodeId node;
};

// Min-heap on (f, node id).
struct HeapAfter {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const noexcept {
        if (a.f != b.f)
            return a.f > b.f;
        return a.node > b.node;
    }
};

template <class Provider>
class Router {
public:
    Router(const Provider& g, const Netlist& nets, const RouterParams& params)
        : g_(g), nets_(nets), params_(params), metas_(g.metas()) {
        const auto n = g.num_nodes();
        base_.resize(n);
        capacity_.resize(n);
        // Adjacent nodes' boxes are at most 2 apart, so entering node v closes
        // at most extent_v + 2 of the remaining distance and costs at least
        // base_v. The smallest such ratio keeps the estimate admissible.
        double per_tile = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& m = metas_[i];
            base_[i] = base_cost(m.kind);
            capacity_[i] = m.capacity;
            const int extent = (m.xhigh - m.xlow) + (m.yhigh - m.ylow);
            per_tile = std::min(per_tile, base_[i] / (extent + 2));
        }
        astar_scale_ = params.astar_enabled && n > 0 ? params.astar_weight * per_tile : 0.0;
        history_.assign(n, 0.0);
        occupancy_.assign(n, 0);
        best_.assign(n, kInf);
        prev_.assign(n, kNoNode);
        prev_switch_.assign(n, 0);
        tree_stamp_.assign(n, 0);
    }

    RoutingResult run(const IterationObserver& observer) {
        const auto t0 = std::chrono::steady_clock::now();
        RoutingResult result;
        result.trees.resize(nets_.size());
        double p_fac = params_.p_fac_init;

        for (int iter = 1; iter <= params_.max_iterations; ++iter) {
            p_fac_ = p_fac;
            result.p_fac_trace.push_back(p_fac);
            for (std::size_t i = 0; i < nets_.size(); ++i) {
                for (const auto& rn : result.trees[i].nodes)
                    --occupancy_[rn.node];
                route_net(nets_.nets[i], result.trees[i]);
                for (const auto& rn : result.trees[i].nodes)
                    ++occupancy_[rn.node];
            }
            result.iterations = iter;
            result.legal = true;
            for (std::size_t n = 0; n < occupancy_.size(); ++n) {
                if (occupancy_[n] > capacity_[n]) {
                    result.legal = false;
                    break;
                }
            }
            if (observer)
                observer({iter, p_fac, result.trees, occupancy_, history_});
            if (result.legal)
                break;
            for (std::size_t n = 0; n < occupancy_.size(); ++n) {
                if (occupancy_[n] > capacity_[n])
                    history_[n] += params_.h_fac * (occupancy_[n] - capacity_[n]);
            }
            p_fac *= params_.p_fac_mult;
        }

        result.nodes_expanded = expanded_;
        result.occupancy = occupancy_;
        result.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return result;
    }

private:
    double node_cost(NodeId n) const noexcept {
        const int over = occupancy_[n] + 1 - capacity_[n];
        const double pres = 1.0 + (over > 0 ? p_fac_ * over : 0.0);
        return (base_[n] + history_[n]) * pres;
    }

    double estimate(NodeId n, int sx, int sy) const noexcept {
        if (astar_scale_ == 0.0)
            return 0.0;
        const auto& m = metas_[n];
        const int dx = std::max({0, m.xlow - sx, sx - m.xhigh});
        const int dy = std::max({0, m.ylow - sy, sy - m.yhigh});
        return astar_scale_ * (dx + dy);
    }

    void route_net(const Net& net, RouteTree& tree) {
        ++stamp_;
        tree.nodes.clear();
        tree.nodes.push_back({net.source, kNoNode, 0});
        tree_stamp_[net.source] = stamp_;

        for (const NodeId sink : net.sinks) {
            const int sx = metas_[sink].xlow, sy = metas_[sink].ylow;
            for (auto t : touched_) {
                best_[t] = kInf;
                prev_[t] = kNoNode;
            }
            touched_.clear();
            heap_.clear();
            for (const auto& rn : tree.nodes) {
                best_[rn.node] = 0.0;
                touched_.push_back(rn.node);
                heap_.push_back({estimate(rn.node, sx, sy), 0.0, rn.node});
            }
            std::make_heap(heap_.begin(), heap_.end(), HeapAfter{});

            bool found = false;
            while (!heap_.empty()) {
                std::pop_heap(heap_.begin(), heap_.end(), HeapAfter{});
                const HeapEntry top = heap_.back();
                heap_.pop_back();
                if (top.g > best_[top.node])
                    continue;
                if (top.node == sink) {
                    found = true;
                    break;
                }
                ++expanded_;
                const auto view = g_.neighbors(top.node, scratch_);
                for (std::size_t k = 0; k < view.targets.size(); ++k) {
                    const NodeId v = view.targets[k];
                    if (tree_stamp_[v] == stamp_)
                        continue;
                    if (v != sink && metas_[v].kind == NodeKind::Sink)
                        continue;
                    const double c = top.g + node_cost(v);
                    if (c < best_[v]) {
                        if (best_[v] == kInf)
                            touched_.push_back(v);
                        best_[v] = c;
                        prev_[v] = top.node;
                        prev_switch_[v] = view.switches[k];
                        heap_.push_back({c + estimate(v, sx, sy), c, v});
                        std::push_heap(heap_.begin(), heap_.end(), HeapAfter{});
                    }
                }
            }
            if (!found)
                throw UnroutableError(net.name, "net " + net.name + ": sink " +
                                                    std::to_string(sink) + " is unreachable");

            path_.clear();
            for (NodeId v = sink; tree_stamp_[v] != stamp_; v = prev_[v])
                path_.push_back(v);
            for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
                tree.nodes.push_back({*it, prev_[*it], prev_switch_[*it]});
                tree_stamp_[*it] = stamp_;
            }
        }
    }

    const Provider& g_;
    const Netlist& nets_;
    RouterParams params_;
    std::span<const RRNodeMeta> metas_;
    std::vector<double> base_;
    std::vector<int> capacity_;
    std::vector<double> history_;
    std::vector<int> occupancy_;
    double p_fac_ = 0.0;
    double astar_scale_ = 0.0;

    std::vector<double> best_;
    std::vector<NodeId> prev_;
    std::vector<std::uint8_t> prev_switch_;
    std::vector<std::uint32_t> tree_stamp_;
    std::uint32_t stamp_ = 0;
    std::vector<NodeId> touched_;
    std::vector<HeapEntry> heap_;
    std::vector<NodeId> path_;
    NeighborScratch scratch_;
    std::uint64_t expanded_ = 0;
};

template <class Provider>
RoutingResult route_with(const Provider& g, const Netlist& nets, const RouterParams& params,
                         const IterationObserver& observer) {
    params.validate();
    validate_netlist(nets, g.metas());
    return Router<Provider>(g, nets, params).run(observer);
}

} // namespace

RoutingResult route(const FlatProvider& g, const Netlist& nets, const RouterParams& params,
                    const IterationObserver& observer) {
    return route_with(g, nets, params, observer);
}

RoutingResult route(const CompressedProvider& g, const Netlist& nets, const RouterParams& params,
                    const IterationObserver& observer) {
    return route_with(g, nets, params, observer);
}

} // namespace rrgz
