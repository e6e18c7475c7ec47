#include "rrgz/netlist.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rrgz/errors.hpp"

namespace rrgz {

void write_netlist(const Netlist& nets, std::ostream& out) {
    for (const auto& net : nets.nets) {
        out << "net " << net.name << ' ' << net.source;
        for (auto s : net.sinks)
            out << ' ' << s;
        out << '\n';
    }
}

Netlist read_netlist(std::istream& in) {
    Netlist nets;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string word;
        if (!(ss >> word) || word[0] == '#')
            continue;
        const auto where = "netlist line " + std::to_string(line_no) + ": ";
        if (word != "net")
            throw ParameterError(where + "expected 'net'");
        Net net;
        long long id = 0;
        if (!(ss >> net.name >> id) || id < 0)
            throw ParameterError(where + "expected name and source id");
        net.source = static_cast<NodeId>(id);
        while (ss >> id) {
            if (id < 0)
                throw ParameterError(where + "negative sink id");
            net.sinks.push_back(static_cast<NodeId>(id));
        }
        if (!ss.eof())
            throw ParameterError(where + "bad sink id");
        if (net.sinks.empty())
            throw ParameterError(where + "net without sinks");
        nets.nets.push_back(std::move(net));
    }
    return nets;
}

void save_netlist(const Netlist& nets, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ParameterError("cannot open " + path + " for writing");
    write_netlist(nets, out);
}

Netlist load_netlist(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open " + path);
    return read_netlist(in);
}

void validate_netlist(const Netlist& nets, std::span<const RRNodeMeta> metas) {
    for (const auto& net : nets.nets) {
        if (net.source >= metas.size() || metas[net.source].kind != NodeKind::Source)
            throw ParameterError("net " + net.name + ": source is not a SOURCE node");
        if (net.sinks.empty())
            throw ParameterError("net " + net.name + ": no sinks");
        auto sorted = net.sinks;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ParameterError("net " + net.name + ": duplicate sink");
        for (auto s : sorted) {
            if (s >= metas.size() || metas[s].kind != NodeKind::Sink)
                throw ParameterError("net " + net.name + ": sink " + std::to_string(s) +
                                     " is not a SINK node");
        }
    }
}

} // namespace rrgz
