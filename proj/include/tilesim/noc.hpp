// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_NOC_HPP
#define TILESIM_NOC_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tilesim/packet.hpp"
#include "tilesim/types.hpp"

namespace tilesim {

struct NocParams {
    std::uint32_t queue_depth = 4;      // flits per input queue
    std::uint32_t router_latency = 1;   // pipeline cycles per link hop, >= 1
    std::uint32_t flit_bits = 64;       // one payload word per flit
    std::uint32_t max_packet_words = 256;
};

// Dimension-order route: along X until the column matches, then along Y.
// Returns the hop sequence excluding src, including dst. Deterministic and
// deadlock-free on a mesh without virtual channels.
std::vector<Coord> route_xy(Coord src, Coord dst, MeshDims dims);

struct Delivery {
    Packet packet;
    Coord at{};
    Cycle cycle = 0;
    std::vector<Coord> route_taken;  // populated only when route recording is on
};

struct LinkFlitCount {
    Coord from{};
    Coord to{};
    Plane plane = Plane::DmaReq;
    std::uint64_t flits = 0;
};

// Packet-switched 2D mesh with three fully independent planes, XY routing,
// wormhole switching and bounded per-port input queues. The fabric is
// advanced by exactly one caller per cycle via step(); inject() starts the
// serialization of a packet at a tile's local port (one flit per cycle).
class Mesh {
public:
    Mesh(MeshDims dims, NocParams params);

    // Begins serializing `pkt` at its source tile. Returns false when the
    // local port is still serializing a previous packet or the local input
    // queue has no room for the header flit; in that case the packet is not
    // consumed and the caller retries on a later cycle.
    bool inject(Packet&& pkt, Coord at, Cycle cycle);

    // Advances every router by one cycle and returns the packets whose tail
    // flit reached its destination's local output this cycle. Must be called
    // with monotonically increasing cycle numbers.
    std::vector<Delivery> step(Cycle cycle);

    bool serializer_busy(Coord at, Plane plane) const;

    std::uint64_t flits_injected() const { return flits_injected_; }
    std::uint64_t flits_delivered() const { return flits_delivered_; }
    std::uint64_t flits_in_flight() const { return flits_injected_ - flits_delivered_; }
    std::uint64_t queued_flits() const;  // recount from the queues, for checks
    std::uint32_t max_queue_occupancy() const { return max_occupancy_; }

    std::uint64_t link_flits(Coord from, Coord to, Plane plane) const;
    std::uint64_t total_link_flits() const;
    std::vector<LinkFlitCount> link_flit_counts() const;  // nonzero links, sorted

    void set_record_routes(bool on) { record_routes_ = on; }

    const MeshDims& dims() const { return dims_; }
    const NocParams& params() const { return params_; }

private:
    // Port order doubles as the fixed arbitration scan order.
    enum PortIdx { kLocal = 0, kNorth, kSouth, kEast, kWest, kPortCount };

    struct Flit {
        std::uint32_t pkt = 0;
        std::uint32_t idx = 0;
        Cycle arrival = 0;
    };

    struct OutputState {
        int locked_input = -1;  // wormhole: header reserved this output
        std::uint32_t locked_pkt = 0;
        std::uint32_t rr = 0;  // round-robin scan start
    };

    struct RouterPlane {
        std::array<std::deque<Flit>, kPortCount> in;
        std::array<OutputState, kPortCount> out;
        // Local-port serializer: flits of the packet still entering the queue.
        std::uint32_t ser_pkt = 0;
        std::uint32_t ser_next = 0;
        std::uint32_t ser_total = 0;
        Cycle ser_free_at = 0;
        std::uint32_t queued = 0;  // flits across all input queues
    };

    struct PacketRec {
        Packet pkt;
        std::uint32_t flits = 0;
        std::vector<Coord> trace;
    };

    int index_of(Coord c) const { return c.y * dims_.cols + c.x; }
    RouterPlane& rp(Coord c, int plane) { return routers_[index_of(c) * kPlaneCount + plane]; }
    const RouterPlane& rp(Coord c, int plane) const {
        return routers_[index_of(c) * kPlaneCount + plane];
    }

    int output_for(Coord here, Coord dst) const;
    Coord neighbor(Coord here, int out) const;
    static int entry_port(int out);  // port on the neighbor a link feeds

    void push_flit(RouterPlane& target, int port, Flit f);
    bool try_move(Coord here, int plane, int out, int in, Cycle cycle,
                  const std::vector<std::uint32_t>& occ_snapshot,
                  std::vector<Delivery>& delivered);

    MeshDims dims_;
    NocParams params_;
    std::vector<RouterPlane> routers_;  // [tile][plane]
    std::unordered_map<std::uint32_t, PacketRec> packets_;
    std::uint32_t next_pkt_id_ = 1;
    std::uint64_t flits_injected_ = 0;
    std::uint64_t flits_delivered_ = 0;
    std::uint32_t max_occupancy_ = 0;
    std::array<std::uint64_t, kPlaneCount> active_flits_{};  // queued + pending serializer
    std::unordered_map<std::uint64_t, std::uint64_t> link_flits_;
    bool record_routes_ = false;
    Cycle last_step_cycle_ = 0;
    bool stepped_ = false;
};

}  // namespace tilesim

#endif
