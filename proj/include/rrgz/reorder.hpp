#pragma once

// Reverse Cuthill-McKee renumbering and bandwidth diagnostics.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rrgz/raw_graph.hpp"

namespace rrgz {

struct Netlist;

struct Permutation {
    std::vector<NodeId> forward;  // old id -> new id
    std::vector<NodeId> inverse;  // new id -> old id

    std::size_t size() const noexcept { return forward.size(); }
    static Permutation identity(std::size_t n);
    // Builds both directions from new->old order; throws ContractError if the
    // order is not a permutation.
    static Permutation from_order(std::vector<NodeId> order);
    Permutation inverted() const { return {inverse, forward}; }

    bool operator==(const Permutation&) const = default;
};

// Reverse Cuthill-McKee on the symmetrized adjacency. Components are handled
// in order of their smallest node id; each starts from a pseudo-peripheral
// node; neighbours are queued by ascending (degree, id).
Permutation rcm_order(const RawGraph& raw);

// Relabels metas and targets; lists are re-sorted. Throws ContractError when
// sizes differ.
RawGraph apply_permutation(const RawGraph& raw, const Permutation& p);
Netlist apply_permutation(const Netlist& nets, const Permutation& p);

// max |target - source| over all edges; 0 when there are none.
std::uint64_t bandwidth(const RawGraph& raw);

// Mean |target - source| over all edges; 0 when there are none.
double mean_abs_delta(const RawGraph& raw);

// Nonzero positions of the adjacency matrix as "row col" lines.
void write_sparsity(const RawGraph& raw, std::ostream& out);

} // namespace rrgz
