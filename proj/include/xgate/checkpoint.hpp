#pragma once

// Self-describing binary checkpoint:
//   magic "XGAT" | u32 version | u32 config length | config (key=value text)
//   then per tensor: u32 name length | name | u8 dtype (0 = f64) |
//   u32 rank | u64 extents... | payload (little-endian f64)
// Read until end of file. Format errors report the byte offset.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "xgate/net.hpp"

namespace xgate {

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f64(std::string& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    put_u64(out, bits);
}

struct ByteReader {
    const std::string& buf;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("checkpoint: " + what + " at offset " + std::to_string(pos));
    }

    void need(std::size_t n) const {
        if (pos + n > buf.size()) fail("truncated (need " + std::to_string(n) + " bytes)");
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += 8;
        return v;
    }

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(buf[pos++]);
    }

    std::string bytes(std::size_t n) {
        need(n);
        std::string s = buf.substr(pos, n);
        pos += n;
        return s;
    }

    double f64() {
        const std::uint64_t bits = u64();
        double d;
        std::memcpy(&d, &bits, sizeof d);
        return d;
    }

    bool done() const { return pos == buf.size(); }
};

}  // namespace detail

inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void save_checkpoint(const std::filesystem::path& path, const std::string& config_text,
                            const std::vector<ParamRef>& tensors) {
    std::string out;
    out += "XGAT";
    detail::put_u32(out, kCheckpointVersion);
    detail::put_u32(out, static_cast<std::uint32_t>(config_text.size()));
    out += config_text;
    for (const auto& t : tensors) {
        detail::put_u32(out, static_cast<std::uint32_t>(t.name.size()));
        out += t.name;
        out.push_back(0);  // dtype tag: f64
        detail::put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
        for (std::size_t e : t.shape) detail::put_u64(out, e);
        for (std::size_t i = 0; i < t.size; ++i) detail::put_f64(out, t.data[i]);
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("checkpoint: cannot open '" + path.string() + "' for write");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("checkpoint: write failed for '" + path.string() + "'");
}

struct Checkpoint {
    std::uint32_t version = 0;
    std::string config_text;
    std::vector<std::string> order;         // tensor names in file order
    std::map<std::string, Tensor> tensors;  // name -> tensor
};

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("checkpoint: cannot open '" + path.string() + "'");
    std::string buf(std::istreambuf_iterator<char>(f), {});
    detail::ByteReader r{buf};

    if (r.bytes(4) != "XGAT") {
        r.pos = 0;
        r.fail("bad magic (expected XGAT)");
    }
    Checkpoint ckpt;
    ckpt.version = r.u32();
    if (ckpt.version != kCheckpointVersion) r.fail("unsupported version");
    const std::uint32_t cfg_len = r.u32();
    ckpt.config_text = r.bytes(cfg_len);

    while (!r.done()) {
        const std::uint32_t name_len = r.u32();
        if (name_len == 0 || name_len > 4096) r.fail("implausible tensor name length");
        const std::string name = r.bytes(name_len);
        const std::uint8_t dtype = r.u8();
        if (dtype != 0) r.fail("unknown dtype tag for tensor '" + name + "'");
        const std::uint32_t rank = r.u32();
        if (rank > 8) r.fail("implausible rank for tensor '" + name + "'");
        std::vector<std::size_t> shape(rank);
        std::size_t numel = 1;
        for (auto& e : shape) {
            e = static_cast<std::size_t>(r.u64());
            numel *= e;
        }
        r.need(numel * 8);  // validate before allocating
        Tensor t(shape);
        for (std::size_t i = 0; i < numel; ++i) t.data[i] = r.f64();
        ckpt.order.push_back(name);
        ckpt.tensors.emplace(name, std::move(t));
    }
    return ckpt;
}

}  // namespace xgate
