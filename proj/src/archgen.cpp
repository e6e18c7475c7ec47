#include "rrgz/archgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "rrgz/errors.hpp"

namespace rrgz {

namespace {

enum Side { kTop = 0, kRight = 1, kBottom = 2, kLeft = 3 };

struct Block {
    BlockKind kind = BlockKind::Clb;
    int x = 0;
    int y = 0;
    std::vector<NodeId> sources;
    std::vector<NodeId> sinks;
    std::vector<NodeId> ipins;
    std::vector<NodeId> opins;
};

// Track reached from `t` on side `from` of a switch box when leaving on
// side `to`, for the classic Wilton pattern.
int wilton(int from, int to, int t, int w) {
    switch (from) {
    case kLeft:
        if (to == kRight) return t;
        if (to == kTop) return (w - t) % w;
        return (w + t - 1) % w;
    case kRight:
        if (to == kLeft) return t;
        if (to == kTop) return (w + t - 1) % w;
        return (2 * w - 2 - t) % w;
    case kBottom:
        if (to == kTop) return t;
        if (to == kLeft) return (t + 1) % w;
        return (2 * w - 2 - t) % w;
    default:  // kTop
        if (to == kBottom) return t;
        if (to == kLeft) return (w - t) % w;
        return (t + 1) % w;
    }
}

bool segment_starts(int pos, int track, int seg_len) {
    if (pos == 1)
        return true;
    const int offset = track % seg_len;
    return ((pos - 1 - offset) % seg_len + seg_len) % seg_len == 0;
}

int segment_end(int start, int track, int seg_len, int len) {
    int end = start;
    while (end + 1 <= len && !segment_starts(end + 1, track, seg_len))
        ++end;
    return end;
}

int tracks_for(double fc, int w) {
    return std::clamp(static_cast<int>(std::lround(fc * w)), 1, w);
}

class Generator {
public:
    explicit Generator(const ArchParams& p)
        : p_(p), w_(p.grid_w), h_(p.grid_h), cw_(p.channel_width) {
        chanx_.assign(static_cast<std::size_t>(h_ + 1) * (w_ + 2) * cw_, kNoNode);
        chany_.assign(static_cast<std::size_t>(w_ + 1) * (h_ + 2) * cw_, kNoNode);
        g_.num_switch_types = kNumGeneratedSwitches;
    }

    RawGraph run() {
        for (int y = 0; y <= h_ + 1; ++y) {
            for (int x = 0; x <= w_ + 1; ++x) {
                make_block(x, y);
                make_chanx(x, y);
                make_chany(x, y);
            }
        }
        for (const auto& b : blocks_)
            connect_block(b);
        for (int y = 0; y <= h_; ++y)
            for (int x = 0; x <= w_; ++x)
                connect_switch_box(x, y);
        for (auto& list : g_.adjacency) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
        return std::move(g_);
    }

private:
    NodeId& chanx(int y, int x, int t) {
        return chanx_[(static_cast<std::size_t>(y) * (w_ + 2) + x) * cw_ + t];
    }
    NodeId& chany(int x, int y, int t) {
        return chany_[(static_cast<std::size_t>(x) * (h_ + 2) + y) * cw_ + t];
    }

    BlockKind core_kind(int x) const {
        for (const auto& c : p_.hetero_columns)
            if (c.column == x)
                return c.kind;
        return BlockKind::Clb;
    }

    std::pair<int, int> core_pins(int x) const {
        for (const auto& c : p_.hetero_columns)
            if (c.column == x)
                return {c.inputs, c.outputs};
        return {p_.clb_inputs, p_.clb_outputs};
    }

    NodeId node(NodeKind kind, int x, int y, int ptc, int capacity) {
        return g_.add_node({kind, x, y, x, y, ptc, capacity});
    }

    void make_block(int x, int y) {
        const bool edge_x = x == 0 || x == w_ + 1;
        const bool edge_y = y == 0 || y == h_ + 1;
        if (edge_x && edge_y)
            return;
        Block b;
        b.x = x;
        b.y = y;
        if (edge_x || edge_y) {
            b.kind = BlockKind::Io;
            const int pads = p_.io_per_side;
            for (int i = 0; i < pads; ++i)
                b.sources.push_back(node(NodeKind::Source, x, y, 2 * i + 1, 1));
            for (int i = 0; i < pads; ++i)
                b.sinks.push_back(node(NodeKind::Sink, x, y, 2 * i, 1));
            for (int i = 0; i < pads; ++i)
                b.ipins.push_back(node(NodeKind::Ipin, x, y, 2 * i, 1));
            for (int i = 0; i < pads; ++i)
                b.opins.push_back(node(NodeKind::Opin, x, y, 2 * i + 1, 1));
        } else {
            b.kind = core_kind(x);
            const auto [in, out] = core_pins(x);
            b.sources.push_back(node(NodeKind::Source, x, y, 1, out));
            b.sinks.push_back(node(NodeKind::Sink, x, y, 0, in));
            for (int i = 0; i < in; ++i)
                b.ipins.push_back(node(NodeKind::Ipin, x, y, i, 1));
            for (int i = 0; i < out; ++i)
                b.opins.push_back(node(NodeKind::Opin, x, y, in + i, 1));
        }
        blocks_.push_back(std::move(b));
    }

    void make_chanx(int x, int y) {
        if (x < 1 || x > w_ || y > h_)
            return;
        for (int t = 0; t < cw_; ++t) {
            if (!segment_starts(x, t, p_.seg_len))
                continue;
            const int end = segment_end(x, t, p_.seg_len, w_);
            const auto id = g_.add_node({NodeKind::ChanX, x, y, end, y, t, 1});
            for (int i = x; i <= end; ++i)
                chanx(y, i, t) = id;
        }
    }

    void make_chany(int x, int y) {
        if (x > w_ || y < 1 || y > h_)
            return;
        for (int t = 0; t < cw_; ++t) {
            if (!segment_starts(y, t, p_.seg_len))
                continue;
            const int end = segment_end(y, t, p_.seg_len, h_);
            const auto id = g_.add_node({NodeKind::ChanY, x, y, x, end, t, 1});
            for (int i = y; i <= end; ++i)
                chany(x, i, t) = id;
        }
    }

    // Segment of track t in the channel on `side` of the block at (x, y).
    NodeId pin_track(int x, int y, int side, int t) {
        switch (side) {
        case kTop: return chanx(y, x, t);
        case kBottom: return chanx(y - 1, x, t);
        case kRight: return chany(x, y, t);
        default: return chany(x - 1, y, t);
        }
    }

    // Pin `j` of `m` same-direction pins on one side. Its n tracks are spaced
    // W/n apart and the m pins are staggered across that gap.
    void connect_pin(NodeId pin, bool is_output, double fc, int x, int y, int side, int j, int m) {
        const int n = tracks_for(fc, cw_);
        const int offset = (j * cw_) / (n * m);
        for (int k = 0; k < n; ++k) {
            const int t = (offset + (k * cw_) / n) % cw_;
            const NodeId track = pin_track(x, y, side, t);
            if (is_output)
                g_.add_edge(pin, track, kSwitchOpinToTrack);
            else
                g_.add_edge(track, pin, kSwitchTrackToIpin);
        }
    }

    void connect_block(const Block& b) {
        if (b.kind == BlockKind::Io) {
            const int side = b.x == 0 ? kRight : b.x == w_ + 1 ? kLeft : b.y == 0 ? kTop : kBottom;
            for (std::size_t i = 0; i < b.sources.size(); ++i) {
                g_.add_edge(b.sources[i], b.opins[i], kSwitchDelayless);
                g_.add_edge(b.ipins[i], b.sinks[i], kSwitchDelayless);
                const int pads = static_cast<int>(b.sources.size());
                connect_pin(b.opins[i], true, p_.fc_pad, b.x, b.y, side, static_cast<int>(i), pads);
                connect_pin(b.ipins[i], false, p_.fc_pad, b.x, b.y, side, static_cast<int>(i), pads);
            }
            return;
        }
        const NodeId source = b.sources.front();
        const NodeId sink = b.sinks.front();
        // Pin p sits on side p % 4; inputs come first, then outputs.
        const int n_in = static_cast<int>(b.ipins.size());
        const int n_out = static_cast<int>(b.opins.size());
        const auto on_side = [](int first, int count, int side) {
            int m = 0;
            for (int p = first; p < first + count; ++p)
                m += p % 4 == side;
            return m;
        };
        for (int i = 0; i < n_in; ++i) {
            g_.add_edge(b.ipins[i], sink, kSwitchDelayless);
            connect_pin(b.ipins[i], false, p_.fc_in, b.x, b.y, i % 4, i / 4, on_side(0, n_in, i % 4));
        }
        for (int j = 0; j < n_out; ++j) {
            g_.add_edge(source, b.opins[j], kSwitchDelayless);
            const int side = (n_in + j) % 4;
            connect_pin(b.opins[j], true, p_.fc_out, b.x, b.y, side, j / 4, on_side(n_in, n_out, side));
        }
    }

    // Switch box at the corner above-right of CLB (x, y).
    void connect_switch_box(int x, int y) {
        auto seg = [&](int side, int t) -> NodeId {
            switch (side) {
            case kLeft: return x >= 1 ? chanx(y, x, t) : kNoNode;
            case kRight: return x + 1 <= w_ ? chanx(y, x + 1, t) : kNoNode;
            case kBottom: return y >= 1 ? chany(x, y, t) : kNoNode;
            default: return y + 1 <= h_ ? chany(x, y + 1, t) : kNoNode;
            }
        };
        for (int from = 0; from < 4; ++from) {
            for (int t = 0; t < cw_; ++t) {
                const NodeId a = seg(from, t);
                if (a == kNoNode)
                    continue;
                for (int to = 0; to < 4; ++to) {
                    if (to == from)
                        continue;
                    const int t2 = p_.switch_block == SwitchBlock::Wilton ? wilton(from, to, t, cw_) : t;
                    const NodeId b = seg(to, t2);
                    if (b != kNoNode && b != a)
                        g_.add_edge(a, b, kSwitchWire);
                }
            }
        }
    }

    const ArchParams& p_;
    int w_, h_, cw_;
    RawGraph g_;
    std::vector<Block> blocks_;
    std::vector<NodeId> chanx_;
    std::vector<NodeId> chany_;
};

const char* kind_name(BlockKind k) {
    switch (k) {
    case BlockKind::Ram: return "RAM";
    case BlockKind::Dsp: return "DSP";
    case BlockKind::Io: return "IO";
    default: return "CLB";
    }
}

} // namespace

void ArchParams::validate() const {
    if (grid_w < 2 || grid_h < 2)
        throw ParameterError("grid must be at least 2x2");
    if (channel_width < 1)
        throw ParameterError("channel_width must be >= 1");
    if (seg_len < 1)
        throw ParameterError("seg_len must be >= 1");
    for (const double fc : {fc_in, fc_out, fc_pad})
        if (!(fc > 0.0 && fc <= 1.0))
            throw ParameterError("fc_in, fc_out and fc_pad must lie in (0, 1]");
    if (clb_inputs < 1 || clb_outputs < 1)
        throw ParameterError("CLBs need at least one input and one output");
    if (io_per_side < 0)
        throw ParameterError("io_per_side must be >= 0");
    for (const auto& c : hetero_columns) {
        if (c.column < 1 || c.column > grid_w)
            throw ParameterError("hetero column " + std::to_string(c.column) + " outside grid");
        if (c.kind != BlockKind::Ram && c.kind != BlockKind::Dsp)
            throw ParameterError("hetero column kind must be RAM or DSP");
        if (c.inputs < 1 || c.outputs < 1)
            throw ParameterError("hetero blocks need at least one input and one output");
    }
}

ArchParams homogeneous_default() { return ArchParams{}; }

ArchParams heterogeneous_default() {
    ArchParams p;
    for (int c = 2; c <= p.grid_w; c += 8)
        p.hetero_columns.push_back({c, BlockKind::Ram, 28, 16});
    for (int c = 6; c <= p.grid_w; c += 8)
        p.hetero_columns.push_back({c, BlockKind::Dsp, 36, 24});
    std::sort(p.hetero_columns.begin(), p.hetero_columns.end(),
              [](const auto& a, const auto& b) { return a.column < b.column; });
    return p;
}

ArchParams parse_arch_params(const std::string& json_text) {
    using nlohmann::json;
    ArchParams p;
    try {
        const auto j = json::parse(json_text);
        if (!j.is_object())
            throw ParameterError("architecture config must be a JSON object");
        p.grid_w = j.value("grid_w", p.grid_w);
        p.grid_h = j.value("grid_h", p.grid_h);
        p.channel_width = j.value("channel_width", p.channel_width);
        p.seg_len = j.value("seg_len", p.seg_len);
        p.fc_in = j.value("fc_in", p.fc_in);
        p.fc_out = j.value("fc_out", p.fc_out);
        p.fc_pad = j.value("fc_pad", p.fc_pad);
        p.clb_inputs = j.value("clb_inputs", p.clb_inputs);
        p.clb_outputs = j.value("clb_outputs", p.clb_outputs);
        p.io_per_side = j.value("io_per_side", p.io_per_side);
        p.seed = j.value("seed", p.seed);
        const auto sb = j.value("switch_block", std::string("DISJOINT"));
        if (sb == "DISJOINT" || sb == "disjoint")
            p.switch_block = SwitchBlock::Disjoint;
        else if (sb == "WILTON" || sb == "wilton")
            p.switch_block = SwitchBlock::Wilton;
        else
            throw ParameterError("unknown switch_block '" + sb + "'");
        if (j.contains("hetero_columns")) {
            for (const auto& c : j.at("hetero_columns")) {
                HeteroColumn h;
                h.column = c.at("column").get<int>();
                const auto kind = c.at("kind").get<std::string>();
                if (kind == "RAM" || kind == "ram")
                    h.kind = BlockKind::Ram;
                else if (kind == "DSP" || kind == "dsp")
                    h.kind = BlockKind::Dsp;
                else
                    throw ParameterError("unknown hetero block kind '" + kind + "'");
                h.inputs = c.at("inputs").get<int>();
                h.outputs = c.at("outputs").get<int>();
                p.hetero_columns.push_back(h);
            }
        }
    } catch (const json::exception& e) {
        throw ParameterError(std::string("bad architecture config: ") + e.what());
    }
    p.validate();
    return p;
}

ArchParams load_arch_params(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_arch_params(ss.str());
}

std::string arch_params_to_json(const ArchParams& p) {
    nlohmann::ordered_json j;
    j["grid_w"] = p.grid_w;
    j["grid_h"] = p.grid_h;
    j["channel_width"] = p.channel_width;
    j["seg_len"] = p.seg_len;
    j["fc_in"] = p.fc_in;
    j["fc_out"] = p.fc_out;
    j["fc_pad"] = p.fc_pad;
    j["clb_inputs"] = p.clb_inputs;
    j["clb_outputs"] = p.clb_outputs;
    j["switch_block"] = p.switch_block == SwitchBlock::Wilton ? "WILTON" : "DISJOINT";
    j["hetero_columns"] = nlohmann::ordered_json::array();
    for (const auto& c : p.hetero_columns)
        j["hetero_columns"].push_back(
            {{"column", c.column}, {"kind", kind_name(c.kind)}, {"inputs", c.inputs},
             {"outputs", c.outputs}});
    j["io_per_side"] = p.io_per_side;
    j["seed"] = p.seed;
    return j.dump(2);
}

bool is_interior_tile(const ArchParams& p, int x, int y) noexcept {
    return x >= 2 && x <= p.grid_w - 1 && y >= 2 && y <= p.grid_h - 1;
}

RawGraph generate_rrg(const ArchParams& p) {
    p.validate();
    return Generator(p).run();
}

Netlist generate_nets(const RawGraph& g, const ArchParams& p, int n_nets, int max_fanout) {
    if (n_nets < 1)
        throw ParameterError("n_nets must be >= 1");
    if (max_fanout < 1)
        throw ParameterError("max_fanout must be >= 1");

    std::vector<NodeId> slots;
    std::vector<NodeId> sinks;
    std::vector<int> room(g.num_nodes(), 0);
    for (NodeId n = 0; n < g.num_nodes(); ++n) {
        const auto& m = g.metas[n];
        if (m.kind == NodeKind::Source)
            slots.insert(slots.end(), static_cast<std::size_t>(m.capacity), n);
        else if (m.kind == NodeKind::Sink) {
            sinks.push_back(n);
            room[n] = m.capacity;
        }
    }
    if (static_cast<std::size_t>(n_nets) > slots.size())
        throw ParameterError("requested " + std::to_string(n_nets) + " nets but only " +
                             std::to_string(slots.size()) + " source slots exist");
    if (sinks.empty())
        throw ParameterError("graph has no SINK nodes");

    std::mt19937_64 rng(p.seed);
    auto below = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

    // Partial Fisher-Yates: the first n_nets slots become the net sources.
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_nets); ++i)
        std::swap(slots[i], slots[i + below(slots.size() - i)]);

    Netlist nets;
    for (int i = 0; i < n_nets; ++i) {
        Net net;
        net.name = "n" + std::to_string(i);
        net.source = slots[static_cast<std::size_t>(i)];
        const auto& sm = g.metas[net.source];
        const auto fanout = 1 + below(static_cast<std::size_t>(max_fanout));
        auto usable = [&](NodeId s) {
            const auto& m = g.metas[s];
            return room[s] > 0 && !(m.xlow == sm.xlow && m.ylow == sm.ylow) &&
                   std::find(net.sinks.begin(), net.sinks.end(), s) == net.sinks.end();
        };
        for (std::size_t attempt = 0; net.sinks.size() < fanout && attempt < 64 * fanout; ++attempt) {
            const NodeId s = sinks[below(sinks.size())];
            if (usable(s)) {
                net.sinks.push_back(s);
                --room[s];
            }
        }
        // Dense fallback when random probing keeps hitting full sinks.
        const auto start = below(sinks.size());
        for (std::size_t k = 0; k < sinks.size() && net.sinks.size() < fanout; ++k) {
            const NodeId s = sinks[(start + k) % sinks.size()];
            if (usable(s)) {
                net.sinks.push_back(s);
                --room[s];
            }
        }
        if (net.sinks.empty())
            throw ParameterError("no sink capacity left for net " + net.name);
        nets.nets.push_back(std::move(net));
    }
    return nets;
}

} // namespace rrgz
