#include "rrgz/graphstore.hpp"

#include <algorithm>
#include <list>
#include <string>
#include <unordered_map>

#include "rrgz/errors.hpp"

namespace rrgz {

namespace {

std::uint64_t fnv1a(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto byte : a) {
        h ^= byte;
        h *= 0x100000001b3ull;
    }
    for (auto byte : b) {
        h ^= byte;
        h *= 0x100000001b3ull;
    }
    return h;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
           std::uint32_t{p[3]} << 24;
}

// Pattern -> most recent inline node holding it, bounded to `capacity` live
// entries (0 = unbounded). Oldest insertions are evicted first.
class PatternWindow {
public:
    explicit PatternWindow(std::uint32_t capacity) : capacity_(capacity) {}

    NodeId find(std::uint64_t hash) const {
        auto it = table_.find(hash);
        return it == table_.end() ? kNoNode : it->second.node;
    }

    void insert(std::uint64_t hash, NodeId node) {
        auto it = table_.find(hash);
        if (it != table_.end()) {
            it->second.node = node;
            if (capacity_ != 0)
                order_.splice(order_.end(), order_, it->second.pos);
            return;
        }
        Slot slot{node, {}};
        if (capacity_ != 0) {
            order_.push_back(hash);
            slot.pos = std::prev(order_.end());
        }
        table_.emplace(hash, slot);
        if (capacity_ != 0 && table_.size() > capacity_) {
            table_.erase(order_.front());
            order_.pop_front();
        }
    }

private:
    struct Slot {
        NodeId node;
        std::list<std::uint64_t>::iterator pos;
    };
    std::uint32_t capacity_;
    std::unordered_map<std::uint64_t, Slot> table_;
    std::list<std::uint64_t> order_;
};

// Dedup key of an inline entry: the count octets plus everything after the
// first delta (tail deltas and all switches).
struct KeyParts {
    std::span<const std::uint8_t> count;
    std::span<const std::uint8_t> rest;
};

KeyParts key_parts(std::span<const std::uint8_t> bytes, const codec::EntryLayout& l) {
    return {bytes.subspan(l.begin, l.deltas_begin - l.begin),
            bytes.subspan(l.tail_begin, l.end - l.tail_begin)};
}

bool same_key(const KeyParts& a, const KeyParts& b) {
    return std::ranges::equal(a.count, b.count) && std::ranges::equal(a.rest, b.rest);
}

} // namespace

MemoryStats compute_stats(std::uint64_t num_nodes, std::uint64_t num_edges,
                          std::uint64_t pool_bytes, std::uint64_t overhead_per_node,
                          std::uint64_t referenced_node_count) {
    MemoryStats s;
    s.num_nodes = num_nodes;
    s.num_edges = num_edges;
    s.baseline_adjacency_bytes = kBaselineBytesPerEdge * num_edges;
    s.pool_bytes = pool_bytes;
    s.index_bytes = kIndexBytesPerNode * num_nodes;
    s.overhead_per_node = overhead_per_node;
    s.node_overhead_bytes = overhead_per_node * num_nodes;
    s.referenced_node_count = referenced_node_count;
    const auto compressed = s.pool_bytes + s.index_bytes;
    s.adjacency_ratio = compressed == 0 ? 1.0
                                        : static_cast<double>(s.baseline_adjacency_bytes) /
                                              static_cast<double>(compressed);
    const auto total = compressed + s.node_overhead_bytes;
    s.total_ratio = total == 0 ? 1.0
                               : static_cast<double>(s.baseline_adjacency_bytes +
                                                     s.node_overhead_bytes) /
                                     static_cast<double>(total);
    return s;
}

CompressedRRG build(const RawGraph& raw, const BuildOptions& opts) {
    if (opts.enable_dedup && !opts.enable_vbyte)
        throw OptionConflictError("dedup requires v-byte encoding");
    if (raw.num_switch_types > codec::kMaxSwitchTypes)
        throw SwitchOverflowError(std::to_string(raw.num_switch_types) +
                                  " switch types do not fit in one octet");
    raw.validate();

    CompressedRRG g;
    g.metas_ = raw.metas;
    g.options_ = opts;
    g.num_switch_types_ = raw.num_switch_types;
    g.num_edges_ = raw.num_edges();
    g.index_.reserve(raw.num_nodes());

    PatternWindow window(opts.window_size);
    std::vector<Edge> sorted;
    std::vector<std::uint64_t> ids;
    std::vector<std::uint32_t> sws;
    std::vector<std::uint8_t> entry;
    std::vector<std::uint8_t> ref;

    for (NodeId node = 0; node < raw.num_nodes(); ++node) {
        if (g.pool_.size() > kOffsetMask)
            throw ContractError("byte pool exceeds 2 GiB");
        const auto offset = static_cast<std::uint32_t>(g.pool_.size());
        sorted = raw.adjacency[node];
        std::sort(sorted.begin(), sorted.end());

        if (!opts.enable_vbyte) {
            for (const auto& e : sorted) {
                put_u32(g.pool_, e.target);
                put_u16(g.pool_, e.switch_id);
            }
            g.index_.push_back(offset);
            continue;
        }

        ids.clear();
        sws.clear();
        for (const auto& e : sorted) {
            ids.push_back(e.target);
            sws.push_back(e.switch_id);
        }
        entry.clear();
        codec::encode_adjacency(ids, sws, entry);

        const bool eligible =
            opts.enable_dedup && !sorted.empty() && sorted.size() - 1 >= opts.min_tail_len;
        std::uint64_t hash = 0;
        if (eligible) {
            const auto layout = codec::parse_entry(entry, 0);
            const auto key = key_parts(entry, layout);
            hash = fnv1a(key.count, key.rest);
            const NodeId cand = window.find(hash);
            if (cand != kNoNode) {
                const auto coff = g.index_[cand] & kOffsetMask;
                const auto clayout = codec::parse_entry(g.pool_, coff);
                if (same_key(key, key_parts(g.pool_, clayout))) {
                    ref.clear();
                    codec::encode_value(static_cast<std::int64_t>(sorted.front().target), ref);
                    codec::encode_value(static_cast<std::int64_t>(node - cand), ref);
                    if (ref.size() < entry.size()) {
                        g.pool_.insert(g.pool_.end(), ref.begin(), ref.end());
                        g.index_.push_back(offset | kReferencedTag);
                        continue;
                    }
                }
            }
        }
        g.pool_.insert(g.pool_.end(), entry.begin(), entry.end());
        g.index_.push_back(offset);
        if (eligible)
            window.insert(hash, node);
    }
    if (g.pool_.size() > kOffsetMask)
        throw ContractError("byte pool exceeds 2 GiB");
    g.refresh_stats();
    return g;
}

void CompressedRRG::refresh_stats() {
    std::uint64_t referenced = 0;
    for (auto slot : index_)
        referenced += (slot & kReferencedTag) ? 1 : 0;
    stats_ = compute_stats(metas_.size(), num_edges_, pool_.size(), options_.overhead_per_node,
                           referenced);
}

void CompressedRRG::neighbors(NodeId node, std::vector<NodeId>& edges,
                              std::vector<std::uint8_t>& switches) const {
    const auto slot = index_[node];
    const std::size_t offset = slot & kOffsetMask;
    const std::span<const std::uint8_t> pool(pool_);

    if (!options_.enable_vbyte) {
        const auto count = (entry_end(node) - offset) / kBaselineBytesPerEdge;
        edges.resize(count);
        switches.resize(count);
        const std::uint8_t* p = pool_.data() + offset;
        for (std::size_t i = 0; i < count; ++i, p += kBaselineBytesPerEdge) {
            edges[i] = get_u32(p);
            switches[i] = p[4];
        }
        return;
    }

    if (!(slot & kReferencedTag)) {
        codec::decode_adjacency(pool.subspan(offset), edges, switches);
        return;
    }

    // Referenced: own first id, then the referent's tail deltas and switches.
    const auto first = codec::decode_value(pool, offset);
    const auto dist = codec::decode_value(pool, first.cursor);
    const NodeId referent = node - static_cast<NodeId>(dist.value);
    auto [count, cursor] = codec::decode_value(pool, index_[referent] & kOffsetMask);
    while (pool_[cursor++] < 128) {
    }
    edges.clear();
    switches.clear();
    std::uint64_t last = first.value;
    edges.push_back(static_cast<NodeId>(last));
    for (std::uint64_t i = 1; i < count; ++i) {
        const auto d = codec::decode_value(pool, cursor);
        cursor = d.cursor;
        last += d.value;
        edges.push_back(static_cast<NodeId>(last));
    }
    switches.assign(pool_.begin() + static_cast<std::ptrdiff_t>(cursor),
                    pool_.begin() + static_cast<std::ptrdiff_t>(cursor + count));
}

EntryInfo CompressedRRG::entry(NodeId node) const {
    const auto slot = index_[node];
    const std::size_t offset = slot & kOffsetMask;
    if (!options_.enable_vbyte)
        return FlatEntry{offset, (entry_end(node) - offset) / kBaselineBytesPerEdge};
    if (!(slot & kReferencedTag))
        return InlineEntry{codec::parse_entry(pool_, offset)};
    const auto first = codec::decode_value(pool_, offset);
    const auto dist = codec::decode_value(pool_, first.cursor);
    return ReferencedEntry{first.value, node - static_cast<NodeId>(dist.value)};
}

RawGraph CompressedRRG::to_raw() const {
    RawGraph raw;
    raw.metas = metas_;
    raw.num_switch_types = num_switch_types_;
    raw.adjacency.resize(metas_.size());
    std::vector<NodeId> ids;
    std::vector<std::uint8_t> sws;
    for (NodeId n = 0; n < metas_.size(); ++n) {
        neighbors(n, ids, sws);
        auto& list = raw.adjacency[n];
        list.reserve(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i)
            list.push_back({ids[i], sws[i]});
    }
    return raw;
}

// Full structural check of a pool read from disk; throws FormatError.
void CompressedRRG::check_entries() const {
    const auto n = metas_.size();
    if (index_.size() != n)
        throw FormatError("index size differs from node count");
    std::uint64_t edges_seen = 0;
    std::size_t prev = 0;
    std::vector<NodeId> ids;
    std::vector<std::uint8_t> sws;
    for (NodeId node = 0; node < n; ++node) {
        const auto slot = index_[node];
        const std::size_t offset = slot & kOffsetMask;
        const bool referenced = (slot & kReferencedTag) != 0;
        if (offset < prev || offset > pool_.size())
            throw FormatError("index offsets out of order at node " + std::to_string(node));
        prev = offset;
        const auto end = entry_end(node);
        if (end < offset || end > pool_.size())
            throw FormatError("index offsets out of order at node " + std::to_string(node));
        const auto bytes = std::span<const std::uint8_t>(pool_).subspan(offset, end - offset);
        try {
            if (!options_.enable_vbyte) {
                if (referenced)
                    throw FormatError("flat layout cannot hold references");
                if (bytes.size() % kBaselineBytesPerEdge != 0)
                    throw FormatError("flat entry not a multiple of 6 octets");
            } else if (!referenced) {
                if (codec::parse_entry(bytes, 0).end != bytes.size())
                    throw FormatError("entry size mismatch at node " + std::to_string(node));
            } else {
                const auto first = codec::decode_value(bytes, 0);
                const auto dist = codec::decode_value(bytes, first.cursor);
                if (dist.cursor != bytes.size())
                    throw FormatError("reference size mismatch at node " + std::to_string(node));
                if (first.value >= n)
                    throw FormatError("first delta out of range at node " + std::to_string(node));
                if (dist.value == 0 || dist.value > node)
                    throw FormatError("reference out of range at node " + std::to_string(node));
                const auto referent = node - static_cast<NodeId>(dist.value);
                if (index_[referent] & kReferencedTag)
                    throw FormatError("reference chain at node " + std::to_string(node));
            }
            neighbors(node, ids, sws);
        } catch (const TruncatedStreamError& e) {
            throw FormatError(std::string("corrupt entry: ") + e.what());
        } catch (const ContractError& e) {
            throw FormatError(std::string("corrupt entry: ") + e.what());
        }
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (ids[i] >= n || sws[i] >= num_switch_types_)
                throw FormatError("edge out of range at node " + std::to_string(node));
        }
        edges_seen += ids.size();
    }
    if (edges_seen != num_edges_)
        throw FormatError("edge count mismatch");
}

} // namespace rrgz
