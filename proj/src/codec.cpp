#include "rrgz/codec.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace rrgz::codec {

namespace {

void put_value(std::uint64_t v, std::vector<std::uint8_t>& out) {
    std::uint8_t digits[kMaxValueOctets];
    std::size_t n = 0;
    do {
        digits[n++] = static_cast<std::uint8_t>(v % 128);
        v /= 128;
    } while (v != 0);
    digits[0] += 128;
    while (n > 0)
        out.push_back(digits[--n]);
}

} // namespace

std::size_t encode_value(std::int64_t v, std::vector<std::uint8_t>& out) {
    if (v < 0)
        throw ContractError("cannot encode negative value " + std::to_string(v));
    const auto before = out.size();
    put_value(static_cast<std::uint64_t>(v), out);
    return out.size() - before;
}

std::vector<std::uint8_t> encode_value(std::int64_t v) {
    std::vector<std::uint8_t> out;
    encode_value(v, out);
    return out;
}

EntryLayout parse_entry(std::span<const std::uint8_t> bytes, std::size_t offset) {
    EntryLayout l;
    l.begin = offset;
    auto [count, cursor] = decode_value(bytes, offset);
    l.count = count;
    l.deltas_begin = cursor;
    if (count > bytes.size())
        throw TruncatedStreamError("adjacency entry shorter than its edge count");
    for (std::uint64_t i = 0; i < count; ++i) {
        // Skip to the next terminator octet.
        do {
            if (cursor >= bytes.size())
                throw TruncatedStreamError("adjacency entry truncated inside deltas");
        } while (bytes[cursor++] < 128);
        if (i == 0)
            l.tail_begin = cursor;
    }
    if (count == 0)
        l.tail_begin = cursor;
    l.switches_begin = cursor;
    if (bytes.size() - cursor < count)
        throw TruncatedStreamError("adjacency entry missing switch octets");
    l.end = cursor + count;
    return l;
}

std::size_t encode_adjacency(std::span<const std::uint64_t> edges,
                             std::span<const std::uint32_t> switches,
                             std::vector<std::uint8_t>& out) {
    if (edges.size() != switches.size())
        throw ContractError("edge and switch lists differ in length");

    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i] >= kValueLimit)
            throw ContractError("edge id " + std::to_string(edges[i]) + " exceeds 2^63");
        if (switches[i] >= kMaxSwitchTypes)
            throw SwitchOverflowError("switch id " + std::to_string(switches[i]) +
                                      " does not fit in one octet");
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (edges[a] != edges[b])
            return edges[a] < edges[b];
        return switches[a] < switches[b];
    });

    const auto before = out.size();
    put_value(edges.size(), out);
    std::uint64_t last = 0;
    for (auto i : order) {
        put_value(edges[i] - last, out);
        last = edges[i];
    }
    for (auto i : order)
        out.push_back(static_cast<std::uint8_t>(switches[i]));
    return out.size() - before;
}

std::vector<std::uint8_t> encode_adjacency(std::span<const std::uint64_t> edges,
                                           std::span<const std::uint32_t> switches) {
    std::vector<std::uint8_t> out;
    encode_adjacency(edges, switches, out);
    return out;
}

} // namespace rrgz::codec
