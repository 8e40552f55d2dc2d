// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_REGISTERS_HPP
#define TILESIM_REGISTERS_HPP

#include <array>
#include <cstdint>

#include "tilesim/types.hpp"

namespace tilesim {

// Memory-mapped registers of the accelerator socket. All registers except
// CMD are writable only while STATUS is Idle.
enum class Reg : std::uint32_t {
    Cmd = 0,          // write 1: start, write 0: return to Idle from Done/Error
    Status = 1,       // read-only; low byte = state, bit 8 = rejected-write flag
    ConfSize = 2,     // total input words of this invocation
    DstOffset = 3,    // output base, word offset inside the TLB window
    TlbBase = 4,      // physical DRAM word address of the contiguous window
    TlbBound = 5,     // window length in words
    Location = 6,     // read-only packed coordinates
    P2p = 7,          // packed p2p configuration
    ChunkBase = 8,    // global id of the first chunk this run processes
    ChunkStride = 9,  // global-id step between consecutive chunks
    AddrStride = 10,  // DMA address step, in chunks, between consecutive chunks
    OutWords = 11,    // generic kernels: output words per chunk
    Alpha = 12,       // image kernels: cycles per input word (0 = default)
    ReuseFactor = 13, // dense kernels: multiplier reuse (0 = default)
    StoreDma = 14,    // nonzero: STORE writes DRAM (may combine with p2p store)
    SrcOffset0 = 16,  // per-segment input base offsets
    SrcOffset1 = 17,
    SrcOffset2 = 18,
    SrcOffset3 = 19,
    SegWords0 = 20,   // per-segment widths in words; 0 = segment unused
    SegWords1 = 21,
    SegWords2 = 22,
    SegWords3 = 23,
    SegSrc0 = 24,     // 0xff = DMA from DRAM, else index into p2p sources
    SegSrc1 = 25,
    SegSrc2 = 26,
    SegSrc3 = 27,
};

constexpr std::uint32_t kRegCount = 28;
constexpr std::uint64_t kSegSrcDma = 0xff;
constexpr int kMaxSegments = 4;

enum class AccelState : std::uint8_t { Idle = 0, Running = 1, Done = 2, Error = 3 };
constexpr std::uint64_t kStatusRejectedWrite = 1u << 8;

inline std::uint64_t pack_location(Coord c) {
    return (static_cast<std::uint64_t>(c.y) << 8) | static_cast<std::uint64_t>(c.x);
}
inline Coord unpack_location(std::uint64_t v) {
    return {static_cast<int>(v & 0xff), static_cast<int>((v >> 8) & 0xff)};
}

// Contents of the P2P register. load side: up to four source tiles whose
// staged chunks are concatenated in source order (or, with round_robin,
// whole chunks taken from sources[chunk % n_sources]). store side: chunks
// are staged until n_consumers receivers have pulled them.
struct P2pConfig {
    bool store_enabled = false;
    bool load_enabled = false;
    bool round_robin = false;
    std::uint8_t n_sources = 0;
    std::array<Coord, 4> sources{};
    std::uint8_t n_consumers = 0;

    friend bool operator==(const P2pConfig& a, const P2pConfig& b) {
        if (a.store_enabled != b.store_enabled || a.load_enabled != b.load_enabled ||
            a.round_robin != b.round_robin || a.n_sources != b.n_sources ||
            a.n_consumers != b.n_consumers) {
            return false;
        }
        for (int i = 0; i < a.n_sources; ++i) {
            if (!(a.sources[i] == b.sources[i])) return false;
        }
        return true;
    }
};

// Layout: bit0 store, bit1 load, bit2 round_robin, bits4-6 n_sources,
// bits8-11 n_consumers, source i packed as x:6 y:6 starting at bit 16+12i.
std::uint64_t pack_p2p(const P2pConfig& cfg);
P2pConfig unpack_p2p(std::uint64_t v);

using RegArray = std::array<std::uint64_t, kRegCount>;

}  // namespace tilesim

#endif
