// RRGZ container, all fixed-width fields little-endian:
//
//   char[4]  magic "RRGZ"
//   u16      version
//   u16      reserved (0)
//   u32      num_nodes
//   u64      num_edges
//   u32      num_switch_types
//   u8       enable_vbyte
//   u8       enable_dedup
//   u16      reserved (0)
//   u32      window_size
//   u32      min_tail_len
//   u32      overhead_per_node
//   num_nodes x { u8 kind, i32 xlow, i32 ylow, i32 xhigh, i32 yhigh, i32 ptc, i32 capacity }
//   num_nodes x u32 index slot
//   u64      pool_bytes
//   pool, verbatim

#include <cstring>
#include <fstream>
#include <iterator>

#include "rrgz/errors.hpp"
#include "rrgz/graphstore.hpp"

namespace rrgz {

namespace {

class Writer {
public:
    explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

    template <class T>
    void put(T v) {
        using U = std::make_unsigned_t<T>;
        auto u = static_cast<U>(v);
        for (std::size_t i = 0; i < sizeof(T); ++i)
            out_.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
    }

    void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

private:
    std::vector<std::uint8_t>& out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    template <class T>
    T get() {
        need(sizeof(T));
        using U = std::make_unsigned_t<T>;
        U u = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            u |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
        pos_ += sizeof(T);
        return static_cast<T>(u);
    }

    std::span<const std::uint8_t> bytes(std::uint64_t n) {
        need(n);
        auto s = in_.subspan(pos_, static_cast<std::size_t>(n));
        pos_ += static_cast<std::size_t>(n);
        return s;
    }

    std::size_t remaining() const noexcept { return in_.size() - pos_; }

private:
    void need(std::uint64_t n) const {
        if (n > remaining())
            throw FormatError("RRGZ file truncated");
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

constexpr std::size_t kMetaBytes = 1 + 6 * 4;

} // namespace

std::vector<std::uint8_t> write_rrgz(const CompressedRRG& g) {
    std::vector<std::uint8_t> out;
    Writer w(out);
    w.bytes({reinterpret_cast<const std::uint8_t*>(kRrgzMagic), 4});
    w.put<std::uint16_t>(kRrgzVersion);
    w.put<std::uint16_t>(0);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(g.num_nodes()));
    w.put<std::uint64_t>(g.stats().num_edges);
    w.put<std::uint32_t>(g.num_switch_types());
    const auto& o = g.options();
    w.put<std::uint8_t>(o.enable_vbyte ? 1 : 0);
    w.put<std::uint8_t>(o.enable_dedup ? 1 : 0);
    w.put<std::uint16_t>(0);
    w.put<std::uint32_t>(o.window_size);
    w.put<std::uint32_t>(o.min_tail_len);
    w.put<std::uint32_t>(o.overhead_per_node);
    for (const auto& m : g.metas()) {
        w.put<std::uint8_t>(static_cast<std::uint8_t>(m.kind));
        w.put<std::int32_t>(m.xlow);
        w.put<std::int32_t>(m.ylow);
        w.put<std::int32_t>(m.xhigh);
        w.put<std::int32_t>(m.yhigh);
        w.put<std::int32_t>(m.ptc);
        w.put<std::int32_t>(m.capacity);
    }
    for (auto slot : g.index())
        w.put<std::uint32_t>(slot);
    w.put<std::uint64_t>(g.pool().size());
    w.bytes(g.pool());
    return out;
}

CompressedRRG read_rrgz(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    const auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), kRrgzMagic, 4) != 0)
        throw FormatError("not an RRGZ file (bad magic)");
    const auto version = r.get<std::uint16_t>();
    if (version != kRrgzVersion)
        throw FormatError("unsupported RRGZ version " + std::to_string(version));
    r.get<std::uint16_t>();

    CompressedRRG g;
    const auto n = r.get<std::uint32_t>();
    g.num_edges_ = r.get<std::uint64_t>();
    g.num_switch_types_ = r.get<std::uint32_t>();
    if (g.num_switch_types_ == 0 || g.num_switch_types_ > codec::kMaxSwitchTypes)
        throw FormatError("bad switch type count");
    g.options_.enable_vbyte = r.get<std::uint8_t>() != 0;
    g.options_.enable_dedup = r.get<std::uint8_t>() != 0;
    r.get<std::uint16_t>();
    if (g.options_.enable_dedup && !g.options_.enable_vbyte)
        throw FormatError("dedup flag set on a flat-layout file");
    g.options_.window_size = r.get<std::uint32_t>();
    g.options_.min_tail_len = r.get<std::uint32_t>();
    g.options_.overhead_per_node = r.get<std::uint32_t>();

    if (static_cast<std::uint64_t>(n) * (kMetaBytes + 4) > r.remaining())
        throw FormatError("RRGZ file truncated");
    g.metas_.resize(n);
    for (auto& m : g.metas_) {
        const auto kind = r.get<std::uint8_t>();
        if (kind >= kNumNodeKinds)
            throw FormatError("bad node kind " + std::to_string(kind));
        m.kind = static_cast<NodeKind>(kind);
        m.xlow = r.get<std::int32_t>();
        m.ylow = r.get<std::int32_t>();
        m.xhigh = r.get<std::int32_t>();
        m.yhigh = r.get<std::int32_t>();
        m.ptc = r.get<std::int32_t>();
        m.capacity = r.get<std::int32_t>();
    }
    g.index_.resize(n);
    for (auto& slot : g.index_)
        slot = r.get<std::uint32_t>();
    const auto pool_size = r.get<std::uint64_t>();
    const auto pool = r.bytes(pool_size);
    g.pool_.assign(pool.begin(), pool.end());
    if (r.remaining() != 0)
        throw FormatError("trailing bytes after RRGZ pool");

    g.check_entries();
    g.refresh_stats();
    return g;
}

void dump(const CompressedRRG& g, const std::string& path) {
    const auto bytes = write_rrgz(g);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw FormatError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw FormatError("write failed: " + path);
}

CompressedRRG load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return read_rrgz(bytes);
}

} // namespace rrgz
