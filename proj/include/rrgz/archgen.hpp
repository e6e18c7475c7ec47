#pragma once

// Synthetic island-style FPGA routing-resource graphs.
//
// CLBs occupy (1..grid_w, 1..grid_h); I/O pads sit on the perimeter tiles
// (corners are empty). CHANX channel y runs above CLB row y (y = 0..grid_h),
// CHANY channel x runs right of CLB column x (x = 0..grid_w). Nodes are
// created tile by tile, row-major, and within a tile by kind, so resources
// that are physically close get close ids.

#include <cstdint>
#include <string>
#include <vector>

#include "rrgz/netlist.hpp"
#include "rrgz/raw_graph.hpp"

namespace rrgz {

enum class SwitchBlock : std::uint8_t { Disjoint, Wilton };
enum class BlockKind : std::uint8_t { Clb, Ram, Dsp, Io };

// Switch ids used by generated graphs.
inline constexpr std::uint16_t kSwitchWire = 0;
inline constexpr std::uint16_t kSwitchOpinToTrack = 1;
inline constexpr std::uint16_t kSwitchTrackToIpin = 2;
inline constexpr std::uint16_t kSwitchDelayless = 3;
inline constexpr std::uint32_t kNumGeneratedSwitches = 4;

struct HeteroColumn {
    int column = 1;
    BlockKind kind = BlockKind::Ram;
    int inputs = 0;
    int outputs = 0;

    bool operator==(const HeteroColumn&) const = default;
};

struct ArchParams {
    int grid_w = 20;
    int grid_h = 20;
    int channel_width = 32;
    int seg_len = 4;
    double fc_in = 0.15;
    double fc_out = 0.25;
    double fc_pad = 1.0;  // I/O pad pins, both directions
    int clb_inputs = 22;
    int clb_outputs = 10;
    SwitchBlock switch_block = SwitchBlock::Disjoint;
    std::vector<HeteroColumn> hetero_columns;
    int io_per_side = 2;
    std::uint64_t seed = 1;

    // Throws ParameterError.
    void validate() const;

    bool operator==(const ArchParams&) const = default;
};

ArchParams homogeneous_default();
// Synthetic RAM/DSP columns: RAM every 8 columns from 2, DSP every 8 from 6.
ArchParams heterogeneous_default();

// JSON config: keys mirror the ArchParams fields; missing keys keep defaults.
// hetero_columns entries are {"column", "kind": "RAM"|"DSP", "inputs", "outputs"}.
ArchParams parse_arch_params(const std::string& json_text);
ArchParams load_arch_params(const std::string& path);
std::string arch_params_to_json(const ArchParams& p);

// Tiles with a full ring of CLB neighbours (2..w-1, 2..h-1).
bool is_interior_tile(const ArchParams& p, int x, int y) noexcept;

RawGraph generate_rrg(const ArchParams& p);

// Seeded synthetic nets: sources drawn without replacement from all SOURCE
// capacity slots, fanout uniform in [1, max_fanout], sinks distinct, never in
// the source's own tile, and never beyond a SINK's capacity.
Netlist generate_nets(const RawGraph& g, const ArchParams& p, int n_nets, int max_fanout);

} // namespace rrgz
