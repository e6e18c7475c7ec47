#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rrgz/raw_graph.hpp"

namespace rrgz {

struct Net {
    std::string name;
    NodeId source = kNoNode;
    std::vector<NodeId> sinks;

    bool operator==(const Net&) const = default;
};

struct Netlist {
    std::vector<Net> nets;

    std::size_t size() const noexcept { return nets.size(); }
    bool operator==(const Netlist&) const = default;
};

// Text form, one net per line: "net <name> <source_id> <sink_id> [<sink_id>...]".
// Blank lines and lines starting with '#' are ignored on read.
void write_netlist(const Netlist& nets, std::ostream& out);
Netlist read_netlist(std::istream& in);
void save_netlist(const Netlist& nets, const std::string& path);
Netlist load_netlist(const std::string& path);

// Throws ParameterError unless every source is a SOURCE node, every sink a
// SINK node, and sinks within a net are distinct.
void validate_netlist(const Netlist& nets, std::span<const RRNodeMeta> metas);

} // namespace rrgz
