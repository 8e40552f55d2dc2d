// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_PACKET_HPP
#define TILESIM_PACKET_HPP

#include <cstdint>
#include <vector>

#include "tilesim/types.hpp"

namespace tilesim {

// The fabric carries three independent plane replicas. DMA requests and
// responses ride decoupled planes so a response can never be blocked
// behind a request; register and interrupt traffic has its own plane.
enum class Plane : std::uint8_t { DmaReq = 0, DmaRsp = 1, Control = 2 };
constexpr int kPlaneCount = 3;

enum class MsgType : std::uint8_t {
    DmaLoadReq,
    DmaLoadRsp,
    DmaStore,
    DmaStoreAck,
    P2pLoadReq,
    P2pLoadRsp,
    ConfigWrite,
    ConfigRead,
    ConfigReadRsp,
    Interrupt,
};

// Fixed message-type -> plane mapping. Stores carry their data on the
// request plane; load data comes back on the response plane. The p2p
// service reuses the same two planes: requests out on DmaReq, data back
// on DmaRsp, through queues a normal DMA flow leaves idle.
constexpr Plane plane_for(MsgType t) {
    switch (t) {
        case MsgType::DmaLoadReq:
        case MsgType::DmaStore:
        case MsgType::P2pLoadReq:
            return Plane::DmaReq;
        case MsgType::DmaLoadRsp:
        case MsgType::DmaStoreAck:
        case MsgType::P2pLoadRsp:
            return Plane::DmaRsp;
        case MsgType::ConfigWrite:
        case MsgType::ConfigRead:
        case MsgType::ConfigReadRsp:
        case MsgType::Interrupt:
            return Plane::Control;
    }
    return Plane::Control;
}

const char* to_string(MsgType t);
const char* to_string(Plane p);

struct PacketMeta {
    std::uint64_t address = 0;  // DRAM word offset (already translated)
    std::uint32_t size = 0;     // requested word count
    std::uint32_t chunk_id = 0;
    std::uint32_t reg = 0;       // register id for config messages
    std::uint64_t value = 0;     // register value / interrupt status
    bool error = false;
    bool last = false;  // final burst of a multi-packet response
};

struct Packet {
    Coord src{};
    Coord dst{};
    MsgType type = MsgType::ConfigWrite;
    PacketMeta meta{};
    std::vector<Word> payload;

    Plane plane() const { return plane_for(type); }
    std::uint32_t length() const { return static_cast<std::uint32_t>(payload.size()); }
    // One header flit plus one flit per payload word.
    std::uint32_t flit_count() const { return 1 + length(); }
};

inline Packet make_packet(MsgType t, Coord src, Coord dst, PacketMeta meta = {},
                          std::vector<Word> payload = {}) {
    Packet p;
    p.src = src;
    p.dst = dst;
    p.type = t;
    p.meta = meta;
    p.payload = std::move(payload);
    return p;
}

}  // namespace tilesim

#endif
