#include <gtest/gtest.h>

#include "rrgz/archgen.hpp"
#include "rrgz/graphstore.hpp"
#include "test_support.hpp"

using namespace rrgz;
using namespace rrgz::test;

namespace {

const std::vector<NodeId> kNodeA = prefix_sums({334, 10, 15, 4, 39, 451, 23, 6});
const std::vector<NodeId> kNodeB = prefix_sums({8525, 10, 15, 4, 39, 451, 23, 6});

RawGraph shared_tail_graph(bool same_switches = true) {
    auto g = empty_nodes(9100, 4);
    add_edges(g, 373, kNodeA, {0, 1, 2, 3, 0, 1, 2, 3});
    add_edges(g, 8564, kNodeB, {0, 1, 2, 3, 0, 1, same_switches ? std::uint16_t{2} : std::uint16_t{0}, 3});
    return g;
}

std::vector<NodeId> neighbor_ids(const CompressedRRG& g, NodeId n) {
    std::vector<NodeId> e;
    std::vector<std::uint8_t> s;
    g.neighbors(n, e, s);
    return e;
}

void expect_lossless(const RawGraph& raw, const CompressedRRG& g) {
    const auto canon = canonical(raw);
    ASSERT_EQ(g.num_nodes(), canon.num_nodes());
    std::vector<NodeId> e;
    std::vector<std::uint8_t> s;
    for (NodeId n = 0; n < canon.num_nodes(); ++n) {
        g.neighbors(n, e, s);
        const auto& list = canon.adjacency[n];
        ASSERT_EQ(e.size(), list.size()) << "node " << n;
        for (std::size_t i = 0; i < list.size(); ++i) {
            ASSERT_EQ(e[i], list[i].target) << "node " << n;
            ASSERT_EQ(s[i], list[i].switch_id) << "node " << n;
        }
    }
    EXPECT_EQ(g.to_raw(), canon);
}

std::vector<BuildOptions> all_option_sets() {
    std::vector<BuildOptions> sets;
    sets.push_back({.enable_vbyte = false, .enable_dedup = false});
    sets.push_back({.enable_vbyte = true, .enable_dedup = false});
    sets.push_back({.enable_vbyte = true, .enable_dedup = true});
    sets.push_back({.enable_vbyte = true, .enable_dedup = true, .window_size = 1024});
    sets.push_back({.enable_vbyte = true, .enable_dedup = true, .window_size = 1});
    sets.push_back({.enable_vbyte = true, .enable_dedup = true, .min_tail_len = 2});
    return sets;
}

} // namespace

TEST(Build, ReferencesRepeatedTail) {
    const auto raw = shared_tail_graph();
    const auto g = build(raw);
    const auto info = g.entry(8564);
    ASSERT_TRUE(std::holds_alternative<ReferencedEntry>(info));
    const auto ref = std::get<ReferencedEntry>(info);
    EXPECT_EQ(ref.first_delta, 8525u);
    EXPECT_EQ(ref.referent, 373u);
    EXPECT_TRUE(std::holds_alternative<InlineEntry>(g.entry(373)));
    EXPECT_EQ(g.stats().referenced_node_count, 1u);

    // Pool bytes of the referenced entry: 8525 and the distance 8191, two octets each.
    const auto start = g.index()[8564] & kOffsetMask;
    const auto end = g.index()[8565] & kOffsetMask;
    EXPECT_EQ(end - start, 4u);
    EXPECT_EQ(g.index()[8564] & kReferencedTag, kReferencedTag);
}

TEST(Build, ReferencedNodeDecodesToPrefixSums) {
    const auto g = build(shared_tail_graph());
    EXPECT_EQ(neighbor_ids(g, 8564),
              (std::vector<NodeId>{8525, 8535, 8550, 8554, 8593, 9044, 9067, 9073}));
    EXPECT_EQ(neighbor_ids(g, 373), kNodeA);
    std::vector<NodeId> e;
    std::vector<std::uint8_t> s;
    g.neighbors(8564, e, s);
    EXPECT_EQ(s, (std::vector<std::uint8_t>{0, 1, 2, 3, 0, 1, 2, 3}));
    expect_lossless(shared_tail_graph(), g);
}

TEST(Build, SwitchMismatchStaysInline) {
    const auto g = build(shared_tail_graph(false));
    EXPECT_TRUE(std::holds_alternative<InlineEntry>(g.entry(373)));
    EXPECT_TRUE(std::holds_alternative<InlineEntry>(g.entry(8564)));
    EXPECT_EQ(g.stats().referenced_node_count, 0u);
    expect_lossless(shared_tail_graph(false), g);
}

TEST(Build, MinTailLengthGate) {
    BuildOptions o;
    o.min_tail_len = 7;
    EXPECT_EQ(build(shared_tail_graph(), o).stats().referenced_node_count, 1u);
    o.min_tail_len = 8;
    EXPECT_EQ(build(shared_tail_graph(), o).stats().referenced_node_count, 0u);
}

TEST(Build, ReferenceOnlyWhenSmaller) {
    // Single-edge lists: [count][delta][switch] vs [first delta][distance].
    auto raw = empty_nodes(400);
    raw.add_edge(0, 1, 0);
    raw.add_edge(300, 1, 0);  // distance 300 needs 2 octets: 3 inline vs 3 referenced
    raw.add_edge(301, 2, 0);  // distance 1: 3 inline vs 2 referenced
    const auto g = build(raw);
    EXPECT_TRUE(std::holds_alternative<InlineEntry>(g.entry(300)));
    ASSERT_TRUE(std::holds_alternative<ReferencedEntry>(g.entry(301)));
    EXPECT_EQ(std::get<ReferencedEntry>(g.entry(301)).referent, 300u);
    expect_lossless(raw, g);
}

TEST(Build, SingleNodeGraph) {
    auto raw = empty_nodes(1);
    raw.add_edge(0, 0, 0);
    const auto g = build(raw);
    EXPECT_TRUE(std::holds_alternative<InlineEntry>(g.entry(0)));
    EXPECT_EQ(g.stats().referenced_node_count, 0u);
    expect_lossless(raw, g);
}

TEST(Build, EmptyListsDecodeEmpty) {
    const auto raw = empty_nodes(5);
    for (const auto& o : all_option_sets()) {
        const auto g = build(raw, o);
        EXPECT_TRUE(neighbor_ids(g, 3).empty());
        EXPECT_EQ(g.stats().referenced_node_count, 0u);
    }
}

TEST(Build, EmptyGraph) {
    const RawGraph raw;
    for (const auto& o : all_option_sets()) {
        const auto g = build(raw, o);
        EXPECT_EQ(g.num_nodes(), 0u);
        EXPECT_EQ(g.stats().pool_bytes, 0u);
        EXPECT_DOUBLE_EQ(g.stats().adjacency_ratio, 1.0);
        EXPECT_DOUBLE_EQ(g.stats().total_ratio, 1.0);
    }
}

TEST(Build, Errors) {
    BuildOptions conflict;
    conflict.enable_vbyte = false;
    conflict.enable_dedup = true;
    EXPECT_THROW(build(empty_nodes(2), conflict), OptionConflictError);

    EXPECT_THROW(build(empty_nodes(2, 257)), SwitchOverflowError);
    EXPECT_NO_THROW(build(empty_nodes(2, 256)));

    auto bad = empty_nodes(2);
    bad.add_edge(0, 5, 0);
    EXPECT_THROW(build(bad), ContractError);
    auto bad_switch = empty_nodes(2, 2);
    bad_switch.add_edge(0, 1, 2);
    EXPECT_THROW(build(bad_switch), ContractError);
}

TEST(Stats, GoldenEntryDeltaBytes) {
    auto raw = empty_nodes(911);
    add_edges(raw, 0, {44, 62, 387, 401, 414, 430, 910});
    const auto g = build(raw, {.enable_vbyte = true, .enable_dedup = false});
    const auto info = g.entry(0);
    ASSERT_TRUE(std::holds_alternative<InlineEntry>(info));
    const auto layout = std::get<InlineEntry>(info).layout;
    EXPECT_EQ(layout.switches_begin - layout.deltas_begin, 9u);
    EXPECT_EQ(layout.size(), 1u + 9u + 7u);
    EXPECT_EQ(g.stats().pool_bytes, 17u + 910u);  // other nodes: a lone count octet each
}

TEST(Stats, FormulasFromCounts) {
    const auto s = compute_stats(100, 500, 1200, 24, 7);
    EXPECT_EQ(s.baseline_adjacency_bytes, 3000u);
    EXPECT_EQ(s.index_bytes, 400u);
    EXPECT_EQ(s.node_overhead_bytes, 2400u);
    EXPECT_EQ(s.referenced_node_count, 7u);
    EXPECT_DOUBLE_EQ(s.adjacency_ratio, 3000.0 / 1600.0);
    EXPECT_DOUBLE_EQ(s.total_ratio, 5400.0 / 4000.0);
}

TEST(Stats, FlatLayoutMatchesBaseline) {
    const auto raw = generate_rrg(tiny_arch(6, 6, 12));
    const auto g = build(raw, {.enable_vbyte = false, .enable_dedup = false});
    const auto& s = g.stats();
    EXPECT_EQ(s.pool_bytes, s.baseline_adjacency_bytes);
    const double e6 = 6.0 * static_cast<double>(raw.num_edges());
    EXPECT_DOUBLE_EQ(s.adjacency_ratio, e6 / (e6 + 4.0 * static_cast<double>(raw.num_nodes())));
    EXPECT_TRUE(std::holds_alternative<FlatEntry>(g.entry(0)));
    expect_lossless(raw, g);
}

TEST(Stats, DedupImprovesTiledGrid) {
    auto p = tiny_arch(8, 8, 16);
    p.seg_len = 4;
    const auto raw = generate_rrg(p);
    const auto plain = build(raw, {.enable_vbyte = true, .enable_dedup = false});
    const auto dedup = build(raw);
    EXPECT_GT(dedup.stats().adjacency_ratio, plain.stats().adjacency_ratio);
    EXPECT_GT(plain.stats().adjacency_ratio, 1.0);
}

TEST(Build, LosslessAcrossOptionSets) {
    const std::vector<ArchParams> archs = {tiny_arch(), tiny_hetero(), [] {
                                               auto p = tiny_arch(5, 7, 10);
                                               p.switch_block = SwitchBlock::Wilton;
                                               p.seg_len = 3;
                                               return p;
                                           }()};
    for (const auto& p : archs) {
        const auto raw = generate_rrg(p);
        double without_dedup = 0.0;
        for (const auto& o : all_option_sets()) {
            const auto g = build(raw, o);
            expect_lossless(raw, g);
            if (o.enable_vbyte && !o.enable_dedup)
                without_dedup = g.stats().adjacency_ratio;
            if (o.enable_dedup)
                EXPECT_GE(g.stats().adjacency_ratio, without_dedup);
        }
    }
}

TEST(Build, ReferencesAreShallowAndSmaller) {
    const auto raw = canonical(generate_rrg(tiny_arch(8, 8, 16)));
    const auto g = build(raw);
    std::uint64_t refs = 0;
    for (NodeId n = 0; n < g.num_nodes(); ++n) {
        const auto info = g.entry(n);
        if (!std::holds_alternative<ReferencedEntry>(info))
            continue;
        ++refs;
        const auto r = std::get<ReferencedEntry>(info);
        ASSERT_LT(r.referent, n);
        EXPECT_TRUE(std::holds_alternative<InlineEntry>(g.entry(r.referent)));

        std::vector<std::uint64_t> ids;
        std::vector<std::uint32_t> sws;
        for (const auto& e : raw.adjacency[n]) {
            ids.push_back(e.target);
            sws.push_back(e.switch_id);
        }
        const auto inline_size = codec::encode_adjacency(ids, sws).size();
        const auto ref_size = codec::encoded_size(r.first_delta) + codec::encoded_size(n - r.referent);
        EXPECT_LT(ref_size, inline_size);
        EXPECT_EQ(ids.front(), r.first_delta);
    }
    EXPECT_EQ(refs, g.stats().referenced_node_count);
    EXPECT_GT(refs, 0u);
}

TEST(Build, BoundedWindowEvicts) {
    // Patterns P, Q, P: a one-slot table forgets P before it recurs.
    auto raw = empty_nodes(40);
    add_edges(raw, 10, {20, 21, 22});
    add_edges(raw, 11, {20, 25, 27});
    add_edges(raw, 12, {30, 31, 32});
    BuildOptions unbounded;
    BuildOptions one;
    one.window_size = 1;
    EXPECT_TRUE(std::holds_alternative<ReferencedEntry>(build(raw, unbounded).entry(12)));
    EXPECT_TRUE(std::holds_alternative<InlineEntry>(build(raw, one).entry(12)));
    expect_lossless(raw, build(raw, one));
}

TEST(Build, UnboundedWindowNeverLarger) {
    auto p = tiny_arch(10, 10, 16);
    p.seg_len = 4;
    const auto raw = generate_rrg(p);
    BuildOptions w0, w1024, w16;
    w1024.window_size = 1024;
    w16.window_size = 16;
    const auto a = build(raw, w0), b = build(raw, w1024), c = build(raw, w16);
    EXPECT_LE(a.stats().pool_bytes, b.stats().pool_bytes);
    EXPECT_LE(b.stats().pool_bytes, c.stats().pool_bytes);
    expect_lossless(raw, a);
    expect_lossless(raw, b);
    expect_lossless(raw, c);
}

TEST(Build, Deterministic) {
    const auto raw = generate_rrg(tiny_hetero());
    EXPECT_EQ(build(raw), build(raw));
    EXPECT_EQ(write_rrgz(build(raw)), write_rrgz(build(raw)));
}

TEST(DumpLoad, RoundTrip) {
    TempDir dir;
    const auto raw = generate_rrg(tiny_hetero());
    for (const auto& o : all_option_sets()) {
        const auto g = build(raw, o);
        const auto path = dir.file("g.rrgz");
        dump(g, path);
        const auto back = load(path);
        EXPECT_EQ(back, g);
        EXPECT_EQ(back.stats(), g.stats());
        expect_lossless(raw, back);
    }
}

TEST(DumpLoad, EmptyGraphFile) {
    TempDir dir;
    const auto g = build(RawGraph{});
    dump(g, dir.file("e.rrgz"));
    const auto bytes = read_file(dir.file("e.rrgz"));
    ASSERT_GE(bytes.size(), 6u);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "RRGZ");
    EXPECT_EQ(bytes[4] | bytes[5] << 8, kRrgzVersion);
    EXPECT_EQ(load(dir.file("e.rrgz")), g);
}

TEST(DumpLoad, RejectsEveryTruncation) {
    auto raw = empty_nodes(12, 3);
    add_edges(raw, 2, {3, 5, 9}, {0, 1, 2});
    add_edges(raw, 7, {1, 3, 7}, {0, 1, 2});
    for (const auto& o : all_option_sets()) {
        const auto bytes = write_rrgz(build(raw, o));
        for (std::size_t cut = 0; cut < bytes.size(); ++cut) {
            const std::span<const std::uint8_t> prefix(bytes.data(), cut);
            EXPECT_THROW(read_rrgz(prefix), FormatError) << cut;
        }
        auto longer = bytes;
        longer.push_back(0);
        EXPECT_THROW(read_rrgz(longer), FormatError);
    }
}

TEST(DumpLoad, RejectsBadHeader) {
    const auto bytes = write_rrgz(build(shared_tail_graph()));
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_THROW(read_rrgz(bad_magic), FormatError);
    auto bad_version = bytes;
    bad_version[4] = 2;
    EXPECT_THROW(read_rrgz(bad_version), FormatError);
    EXPECT_THROW(load("/nonexistent/dir/graph.rrgz"), FormatError);
}

TEST(DumpLoad, RejectsCorruptIndex) {
    const auto g = build(shared_tail_graph());
    auto bytes = write_rrgz(g);
    // Flip the referenced tag of node 373, turning an inline entry into a
    // reference to a node that does not precede it.
    const auto pool_size = g.pool().size();
    const auto index_end = bytes.size() - pool_size - 8;
    const auto slot = index_end - 4 * (g.num_nodes() - 373) + 3;
    bytes[slot] ^= 0x80;
    EXPECT_THROW(read_rrgz(bytes), FormatError);
}
