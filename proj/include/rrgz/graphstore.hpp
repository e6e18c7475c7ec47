#pragma once

// Compressed routing-resource graph.
//
// Adjacency entries for all nodes live in one shared byte pool, written in
// node-id order. Each node has a 4-octet index slot: the low 31 bits hold the
// pool offset of its entry, the top bit marks a referenced entry.
//
//   inline entry      codec layout: [count][deltas][switches]
//   referenced entry  [first_delta][distance]  (referent = node - distance)
//
// A referenced node shares count, tail deltas and switches with an earlier
// inline node and only stores its own first delta. Referents are always
// inline, so decoding follows at most one link.
//
// With v-byte disabled the pool uses a flat layout of 6 octets per edge
// (u32 target, u16 switch, little-endian) and counts are recovered from the
// offset of the next node.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rrgz/codec.hpp"
#include "rrgz/raw_graph.hpp"

namespace rrgz {

struct BuildOptions {
    bool enable_vbyte = true;
    bool enable_dedup = true;
    // Capacity of the pattern table; 0 keeps every pattern.
    std::uint32_t window_size = 0;
    // Minimum number of deltas after the first one for a node to take part in
    // dedup.
    std::uint32_t min_tail_len = 0;
    std::uint32_t overhead_per_node = 24;

    bool operator==(const BuildOptions&) const = default;
};

struct MemoryStats {
    std::uint64_t num_nodes = 0;
    std::uint64_t num_edges = 0;
    std::uint64_t baseline_adjacency_bytes = 0;
    std::uint64_t pool_bytes = 0;
    std::uint64_t index_bytes = 0;
    std::uint64_t overhead_per_node = 0;
    std::uint64_t node_overhead_bytes = 0;
    std::uint64_t referenced_node_count = 0;
    double adjacency_ratio = 0.0;
    double total_ratio = 0.0;

    bool operator==(const MemoryStats&) const = default;
};

inline constexpr std::uint64_t kBaselineBytesPerEdge = 6;  // int target + short switch
inline constexpr std::uint64_t kIndexBytesPerNode = 4;
inline constexpr std::uint32_t kReferencedTag = 0x8000'0000u;
inline constexpr std::uint32_t kOffsetMask = 0x7FFF'FFFFu;

MemoryStats compute_stats(std::uint64_t num_nodes, std::uint64_t num_edges,
                          std::uint64_t pool_bytes, std::uint64_t overhead_per_node,
                          std::uint64_t referenced_node_count);

struct InlineEntry {
    codec::EntryLayout layout;
};

struct ReferencedEntry {
    std::uint64_t first_delta = 0;
    NodeId referent = kNoNode;
};

// Flat-layout entry (v-byte disabled).
struct FlatEntry {
    std::size_t offset = 0;
    std::size_t count = 0;
};

using EntryInfo = std::variant<InlineEntry, ReferencedEntry, FlatEntry>;

class CompressedRRG {
public:
    CompressedRRG() = default;

    std::size_t num_nodes() const noexcept { return metas_.size(); }
    std::uint32_t num_switch_types() const noexcept { return num_switch_types_; }
    const RRNodeMeta& meta(NodeId node) const { return metas_[node]; }
    std::span<const RRNodeMeta> metas() const noexcept { return metas_; }
    std::span<const std::uint8_t> pool() const noexcept { return pool_; }
    std::span<const std::uint32_t> index() const noexcept { return index_; }
    const BuildOptions& options() const noexcept { return options_; }
    const MemoryStats& stats() const noexcept { return stats_; }

    // Fills the scratch lists with the node's sorted targets and their switch
    // ids. Only writes to the caller's buffers.
    void neighbors(NodeId node, std::vector<NodeId>& edges,
                   std::vector<std::uint8_t>& switches) const;

    EntryInfo entry(NodeId node) const;

    RawGraph to_raw() const;

    bool operator==(const CompressedRRG&) const = default;

private:
    friend CompressedRRG build(const RawGraph&, const BuildOptions&);
    friend CompressedRRG load(const std::string&);
    friend CompressedRRG read_rrgz(std::span<const std::uint8_t>);

    std::size_t entry_end(NodeId node) const noexcept {
        return node + 1 < index_.size() ? (index_[node + 1] & kOffsetMask) : pool_.size();
    }
    void refresh_stats();
    void check_entries() const;

    std::vector<RRNodeMeta> metas_;
    std::vector<std::uint8_t> pool_;
    std::vector<std::uint32_t> index_;
    std::uint64_t num_edges_ = 0;
    std::uint32_t num_switch_types_ = 1;
    BuildOptions options_;
    MemoryStats stats_;
};

// Compresses raw. Throws SwitchOverflowError for more than 256 switch types,
// OptionConflictError for dedup without v-byte, ContractError for an invalid
// graph.
CompressedRRG build(const RawGraph& raw, const BuildOptions& opts = {});

inline MemoryStats stats(const CompressedRRG& g) { return g.stats(); }

inline constexpr char kRrgzMagic[4] = {'R', 'R', 'G', 'Z'};
inline constexpr std::uint16_t kRrgzVersion = 1;

std::vector<std::uint8_t> write_rrgz(const CompressedRRG& g);
CompressedRRG read_rrgz(std::span<const std::uint8_t> bytes);

// Binary container round trip. Errors surface as FormatError.
void dump(const CompressedRRG& g, const std::string& path);
CompressedRRG load(const std::string& path);

} // namespace rrgz
