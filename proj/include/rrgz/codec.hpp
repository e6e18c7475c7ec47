#pragma once

// Sorted-delta + v-byte coding of adjacency lists.
//
// A value is written as big-endian base-128 digits; every digit but the last
// is stored as-is (0..127) and the last one carries +128 (128..255). So 44
// is 0xAC and 480 is 0x03 0xE0. An adjacency entry is laid out as
//
//   [count][delta_0 ... delta_{count-1}][switch_0 ... switch_{count-1}]
//
// where count and the deltas are v-byte values and each switch id takes one
// octet. Pairs are sorted by (target, switch) before the deltas are taken, the
// first delta is measured from 0.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rrgz/errors.hpp"

namespace rrgz::codec {

// Largest value the codec accepts (exclusive); keeps encodings at <= 9 octets.
inline constexpr std::uint64_t kValueLimit = std::uint64_t{1} << 63;
inline constexpr std::size_t kMaxValueOctets = 9;
inline constexpr std::uint32_t kMaxSwitchTypes = 256;

// Number of octets encode_value produces for v.
constexpr std::size_t encoded_size(std::uint64_t v) noexcept {
    std::size_t n = 1;
    while (v >= 128) {
        v >>= 7;
        ++n;
    }
    return n;
}

// Appends the encoding of v to out and returns the number of octets written.
// Throws ContractError for v < 0.
std::size_t encode_value(std::int64_t v, std::vector<std::uint8_t>& out);

// Convenience overload returning a fresh fragment.
std::vector<std::uint8_t> encode_value(std::int64_t v);

struct Decoded {
    std::uint64_t value;
    std::size_t cursor;
};

// Reads one value starting at bytes[cursor].
inline Decoded decode_value(std::span<const std::uint8_t> bytes, std::size_t cursor) {
    std::uint64_t v = 0;
    for (std::size_t digits = 0;; ++digits) {
        if (cursor >= bytes.size())
            throw TruncatedStreamError("v-byte stream ends before a terminator octet");
        if (digits == kMaxValueOctets)
            throw ContractError("v-byte value longer than 9 octets");
        const std::uint8_t b = bytes[cursor++];
        if (b < 128) {
            v = v * 128 + b;
        } else {
            v = v * 128 + (b - 128);
            return {v, cursor};
        }
    }
}

// Offsets of the pieces of one adjacency entry, relative to the span it was
// parsed from.
struct EntryLayout {
    std::uint64_t count = 0;
    std::size_t begin = 0;         // first octet of the count
    std::size_t deltas_begin = 0;  // first octet of delta_0
    std::size_t tail_begin = 0;    // first octet of delta_1 (== switches_begin if count < 2)
    std::size_t switches_begin = 0;
    std::size_t end = 0;           // one past the last switch octet

    std::size_t size() const noexcept { return end - begin; }
};

// Locates the pieces of the entry starting at bytes[offset] without decoding
// the ids. Throws TruncatedStreamError if the entry runs past the span.
EntryLayout parse_entry(std::span<const std::uint8_t> bytes, std::size_t offset);

// Appends the canonical entry for (edges, switches) to out and returns its
// size in octets. Throws ContractError on length mismatch or an id outside
// [0, 2^63), SwitchOverflowError for a switch id >= 256.
std::size_t encode_adjacency(std::span<const std::uint64_t> edges,
                             std::span<const std::uint32_t> switches,
                             std::vector<std::uint8_t>& out);

std::vector<std::uint8_t> encode_adjacency(std::span<const std::uint64_t> edges,
                                           std::span<const std::uint32_t> switches);

// Decodes the entry at the front of `entry` into the caller's scratch lists
// (cleared first) and returns the number of octets consumed.
template <class Id>
std::size_t decode_adjacency(std::span<const std::uint8_t> entry,
                             std::vector<Id>& out_edges,
                             std::vector<std::uint8_t>& out_switches) {
    out_edges.clear();
    out_switches.clear();
    auto [count, cursor] = decode_value(entry, 0);
    if (count > entry.size())
        throw TruncatedStreamError("adjacency entry shorter than its edge count");
    std::uint64_t last = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto d = decode_value(entry, cursor);
        cursor = d.cursor;
        last += d.value;
        out_edges.push_back(static_cast<Id>(last));
    }
    if (entry.size() - cursor < count)
        throw TruncatedStreamError("adjacency entry missing switch octets");
    out_switches.assign(entry.begin() + static_cast<std::ptrdiff_t>(cursor),
                        entry.begin() + static_cast<std::ptrdiff_t>(cursor + count));
    return cursor + count;
}

} // namespace rrgz::codec
