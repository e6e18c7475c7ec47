#include <gtest/gtest.h>

#include <deque>
#include <map>
#include <random>

#include "rrgz/archgen.hpp"
#include "rrgz/graphstore.hpp"
#include "rrgz/reorder.hpp"
#include "rrgz/router.hpp"
#include "test_support.hpp"

using namespace rrgz;
using namespace rrgz::test;

namespace {

// Hop count from src to dst, never passing through another SINK.
int bfs_hops(const RawGraph& g, NodeId src, NodeId dst) {
    std::vector<int> dist(g.num_nodes(), -1);
    std::deque<NodeId> q{src};
    dist[src] = 0;
    while (!q.empty()) {
        const auto u = q.front();
        q.pop_front();
        if (u == dst)
            return dist[u];
        if (u != src && g.metas[u].kind == NodeKind::Sink)
            continue;
        for (const auto& e : g.adjacency[u])
            if (dist[e.target] < 0) {
                dist[e.target] = dist[u] + 1;
                q.push_back(e.target);
            }
    }
    return -1;
}

struct Conflict {
    RawGraph g;
    Netlist nets;
};

// Net a can take the shared wire T or a two-wire detour; net b must use T.
Conflict conflict_instance(bool with_detour = true) {
    Conflict c;
    auto& g = c.g;
    g.num_switch_types = 2;
    auto add = [&](NodeKind k, int x) { return g.add_node({k, x, 0, x, 0, 0, 1}); };
    const auto s1 = add(NodeKind::Source, 0), s2 = add(NodeKind::Source, 0);
    const auto t = add(NodeKind::ChanX, 1), u1 = add(NodeKind::ChanX, 1), u2 = add(NodeKind::ChanX, 1);
    const auto k1 = add(NodeKind::Sink, 2), k2 = add(NodeKind::Sink, 2);
    g.add_edge(s1, t, 0);
    if (with_detour) {
        g.add_edge(s1, u1, 1);
        g.add_edge(u1, u2, 0);
        g.add_edge(u2, k1, 1);
    }
    g.add_edge(t, k1, 1);
    g.add_edge(s2, t, 0);
    g.add_edge(t, k2, 1);
    c.nets.nets = {{"a", s1, {k1}}, {"b", s2, {k2}}};
    return c;
}

void expect_valid_trees(const RawGraph& g, const Netlist& nets, const RoutingResult& r) {
    ASSERT_EQ(r.trees.size(), nets.size());
    std::vector<int> occ(g.num_nodes(), 0);
    for (std::size_t i = 0; i < nets.size(); ++i) {
        const auto& tree = r.trees[i].nodes;
        ASSERT_FALSE(tree.empty());
        EXPECT_EQ(tree.front().node, nets.nets[i].source);
        EXPECT_EQ(tree.front().parent, kNoNode);
        std::map<NodeId, std::size_t> pos;
        for (std::size_t k = 0; k < tree.size(); ++k) {
            const auto& rn = tree[k];
            EXPECT_TRUE(pos.emplace(rn.node, k).second) << "node repeated in tree";
            ++occ[rn.node];
            if (k == 0)
                continue;
            ASSERT_TRUE(pos.contains(rn.parent)) << "parent must precede child";
            const auto& list = g.adjacency[rn.parent];
            EXPECT_NE(std::find(list.begin(), list.end(), Edge{rn.node, rn.switch_id}), list.end())
                << "tree edge missing from graph";
        }
        for (auto s : nets.nets[i].sinks)
            EXPECT_TRUE(pos.contains(s));
    }
    EXPECT_EQ(occ, r.occupancy);
    if (r.legal)
        for (NodeId n = 0; n < g.num_nodes(); ++n)
            EXPECT_LE(r.occupancy[n], g.metas[n].capacity);
}

} // namespace

TEST(BaseCost, ByKind) {
    EXPECT_DOUBLE_EQ(base_cost(NodeKind::Sink), 0.5);
    EXPECT_DOUBLE_EQ(base_cost(NodeKind::Ipin), 0.95);
    EXPECT_DOUBLE_EQ(base_cost(NodeKind::ChanX), 1.0);
    EXPECT_DOUBLE_EQ(base_cost(NodeKind::Opin), 1.0);
}

TEST(RouterParams, Validation) {
    RouterParams p;
    EXPECT_NO_THROW(p.validate());
    p.p_fac_mult = 1.0;
    EXPECT_THROW(p.validate(), ParameterError);
    p = {};
    p.max_iterations = 0;
    EXPECT_THROW(p.validate(), ParameterError);
    p = {};
    p.h_fac = -1;
    EXPECT_THROW(p.validate(), ParameterError);
}

TEST(Route, ShortestPathMatchesBreadthFirstOracle) {
    auto p = tiny_arch(5, 5, 6);
    p.fc_in = p.fc_out = 1.0;
    const auto g = generate_rrg(p);
    const FlatProvider flat(g);
    std::vector<NodeId> sources, sinks;
    for (NodeId n = 0; n < g.num_nodes(); ++n) {
        if (g.metas[n].kind == NodeKind::Source)
            sources.push_back(n);
        if (g.metas[n].kind == NodeKind::Sink)
            sinks.push_back(n);
    }
    std::mt19937 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = sources[rng() % sources.size()];
        const auto k = sinks[rng() % sinks.size()];
        const Netlist nets{{{"n", s, {k}}}};
        for (bool astar : {true, false}) {
            RouterParams rp;
            rp.astar_enabled = astar;
            const auto r = route(flat, nets, rp);
            EXPECT_TRUE(r.legal);
            EXPECT_EQ(r.iterations, 1);
            const int hops = bfs_hops(g, s, k);
            ASSERT_GT(hops, 0);
            EXPECT_EQ(static_cast<int>(r.trees[0].nodes.size()) - 1, hops)
                << "source " << s << " sink " << k << " astar " << astar;
            expect_valid_trees(g, nets, r);
        }
    }
}

TEST(Route, AstarExpandsFewerNodes) {
    const auto p = tiny_arch(8, 8, 8);
    const auto g = generate_rrg(p);
    const auto nets = generate_nets(g, p, 30, 3);
    const FlatProvider flat(g);
    RouterParams with, without;
    without.astar_enabled = false;
    const auto a = route(flat, nets, with), b = route(flat, nets, without);
    EXPECT_TRUE(a.legal);
    EXPECT_TRUE(b.legal);
    EXPECT_LT(a.nodes_expanded, b.nodes_expanded);
}

TEST(Route, NegotiatesSharedWire) {
    const auto c = conflict_instance();
    const auto r = route(FlatProvider(c.g), c.nets, RouterParams{});
    EXPECT_TRUE(r.legal);
    EXPECT_GT(r.iterations, 1);
    EXPECT_EQ(*std::max_element(r.occupancy.begin(), r.occupancy.end()), 1);
    // Net a takes the detour: SOURCE, two wires, SINK.
    EXPECT_EQ(r.trees[0].nodes.size(), 4u);
    EXPECT_EQ(r.trees[1].nodes.size(), 3u);
    expect_valid_trees(c.g, c.nets, r);
}

TEST(Route, ExhaustsIterationsWhenImpossible) {
    const auto c = conflict_instance(false);
    RouterParams rp;
    rp.max_iterations = 4;
    const auto r = route(FlatProvider(c.g), c.nets, rp);
    EXPECT_FALSE(r.legal);
    EXPECT_EQ(r.iterations, 4);
    EXPECT_EQ(r.occupancy[2], 2);
}

TEST(Route, UnreachableSinkNamesNet) {
    auto c = conflict_instance();
    const auto lonely = c.g.add_node({NodeKind::Sink, 3, 0, 3, 0, 0, 1});
    c.nets.nets.push_back({"stranded", 1, {lonely}});
    try {
        route(FlatProvider(c.g), c.nets, RouterParams{});
        FAIL() << "expected UnroutableError";
    } catch (const UnroutableError& e) {
        EXPECT_EQ(e.net(), "stranded");
    }
}

TEST(Route, RejectsBadInput) {
    const auto c = conflict_instance();
    const FlatProvider flat(c.g);
    RouterParams bad;
    bad.p_fac_mult = 0.5;
    EXPECT_THROW(route(flat, c.nets, bad), ParameterError);
    const Netlist wrong_kind{{{"x", 2, {5}}}};
    EXPECT_THROW(route(flat, wrong_kind, RouterParams{}), ParameterError);
}

TEST(Route, ObserverSeesMonotonePressure) {
    const auto p = tiny_arch(6, 6, 4);
    const auto g = generate_rrg(p);
    const auto nets = generate_nets(g, p, 60, 4);
    std::vector<double> p_facs;
    std::vector<double> last_history;
    std::size_t observed = 0;
    const auto r = route(FlatProvider(g), nets, RouterParams{}, [&](const IterationState& s) {
        ++observed;
        EXPECT_EQ(s.iteration, static_cast<int>(observed));
        p_facs.push_back(s.p_fac);
        if (!last_history.empty())
            for (std::size_t n = 0; n < s.history.size(); ++n)
                EXPECT_GE(s.history[n], last_history[n]);
        last_history.assign(s.history.begin(), s.history.end());
        std::vector<int> occ(g.num_nodes(), 0);
        for (const auto& t : s.trees)
            for (const auto& rn : t.nodes)
                ++occ[rn.node];
        EXPECT_TRUE(std::equal(occ.begin(), occ.end(), s.occupancy.begin()));
    });
    ASSERT_GT(observed, 1u) << "instance should need more than one iteration";
    EXPECT_EQ(observed, static_cast<std::size_t>(r.iterations));
    EXPECT_EQ(p_facs, r.p_fac_trace);
    for (std::size_t i = 1; i < p_facs.size(); ++i)
        EXPECT_GT(p_facs[i], p_facs[i - 1]);
    expect_valid_trees(g, nets, r);
}

TEST(Providers, NeighborListsAgree) {
    for (const auto& p : {tiny_arch(), tiny_hetero()}) {
        const auto g = generate_rrg(p);
        const FlatProvider flat(g);
        for (const auto& o : {BuildOptions{}, BuildOptions{.enable_vbyte = false, .enable_dedup = false}}) {
            const auto built = build(g, o);
            const CompressedProvider comp(built);
            NeighborScratch a, b;
            for (NodeId n = 0; n < g.num_nodes(); ++n) {
                const auto x = flat.neighbors(n, a);
                const auto y = comp.neighbors(n, b);
                ASSERT_TRUE(std::ranges::equal(x.targets, y.targets)) << n;
                ASSERT_TRUE(std::ranges::equal(x.switches, y.switches)) << n;
            }
        }
    }
    auto empty = empty_nodes(2);
    const auto built = build(empty);
    NeighborScratch s;
    EXPECT_TRUE(FlatProvider(empty).neighbors(1, s).targets.empty());
    EXPECT_TRUE(CompressedProvider(built).neighbors(1, s).targets.empty());
}

TEST(Providers, IdenticalRouting) {
    for (const auto& p : {tiny_arch(6, 6, 6), tiny_hetero(8, 6, 6)}) {
        const auto g = generate_rrg(p);
        const auto nets = generate_nets(g, p, 50, 4);
        const auto built = build(g);
        for (bool astar : {true, false}) {
            RouterParams rp;
            rp.astar_enabled = astar;
            const auto a = route(FlatProvider(g), nets, rp);
            const auto b = route(CompressedProvider(built), nets, rp);
            EXPECT_TRUE(a.same_routing(b));
            EXPECT_EQ(route_tree_hash(a), route_tree_hash(b));
            expect_valid_trees(g, nets, a);
        }
    }
}

TEST(Route, Deterministic) {
    const auto p = tiny_hetero();
    const auto g = generate_rrg(p);
    const auto nets = generate_nets(g, p, 40, 3);
    const FlatProvider flat(g);
    const auto a = route(flat, nets, RouterParams{});
    const auto b = route(flat, nets, RouterParams{});
    EXPECT_TRUE(a.same_routing(b));
}

TEST(Route, RelabelledGraphGivesIsomorphicTrees) {
    const auto c = conflict_instance();
    const auto perm = Permutation::from_order({6, 4, 2, 0, 1, 3, 5});
    const auto g2 = apply_permutation(c.g, perm);
    const auto nets2 = apply_permutation(c.nets, perm);
    const auto a = route(FlatProvider(c.g), c.nets, RouterParams{});
    const auto b = route(FlatProvider(g2), nets2, RouterParams{});
    EXPECT_EQ(a.iterations, b.iterations);
    ASSERT_EQ(a.trees.size(), b.trees.size());
    for (std::size_t i = 0; i < a.trees.size(); ++i) {
        ASSERT_EQ(a.trees[i].nodes.size(), b.trees[i].nodes.size());
        for (std::size_t k = 0; k < a.trees[i].nodes.size(); ++k) {
            const auto& x = a.trees[i].nodes[k];
            const auto& y = b.trees[i].nodes[k];
            EXPECT_EQ(perm.forward[x.node], y.node);
            EXPECT_EQ(x.parent == kNoNode ? kNoNode : perm.forward[x.parent], y.parent);
            EXPECT_EQ(x.switch_id, y.switch_id);
        }
    }
}

TEST(RouteTreeHash, SensitiveToTrees) {
    const auto c = conflict_instance();
    auto r = route(FlatProvider(c.g), c.nets, RouterParams{});
    const auto h = route_tree_hash(r);
    EXPECT_EQ(h, route_tree_hash(r));
    r.trees[0].nodes.back().switch_id ^= 1;
    EXPECT_NE(h, route_tree_hash(r));
}
