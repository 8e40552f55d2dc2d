// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#include "tilesim/noc.hpp"

#include <algorithm>
#include <cassert>

namespace tilesim {

const char* to_string(MsgType t) {
    switch (t) {
        case MsgType::DmaLoadReq: return "DmaLoadReq";
        case MsgType::DmaLoadRsp: return "DmaLoadRsp";
        case MsgType::DmaStore: return "DmaStore";
        case MsgType::DmaStoreAck: return "DmaStoreAck";
        case MsgType::P2pLoadReq: return "P2pLoadReq";
        case MsgType::P2pLoadRsp: return "P2pLoadRsp";
        case MsgType::ConfigWrite: return "ConfigWrite";
        case MsgType::ConfigRead: return "ConfigRead";
        case MsgType::ConfigReadRsp: return "ConfigReadRsp";
        case MsgType::Interrupt: return "Interrupt";
    }
    return "?";
}

const char* to_string(Plane p) {
    switch (p) {
        case Plane::DmaReq: return "dma_req";
        case Plane::DmaRsp: return "dma_rsp";
        case Plane::Control: return "control";
    }
    return "?";
}

std::vector<Coord> route_xy(Coord src, Coord dst, MeshDims dims) {
    if (!dims.contains(src) || !dims.contains(dst)) {
        throw ConfigError("route_xy: coordinate out of mesh bounds, src=" + to_string(src) +
                          " dst=" + to_string(dst));
    }
    std::vector<Coord> hops;
    Coord at = src;
    while (at.x != dst.x) {
        at.x += (dst.x > at.x) ? 1 : -1;
        hops.push_back(at);
    }
    while (at.y != dst.y) {
        at.y += (dst.y > at.y) ? 1 : -1;
        hops.push_back(at);
    }
    return hops;
}

namespace {

std::uint64_t link_key(Coord from, Coord to, int plane) {
    auto u = [](int v) { return static_cast<std::uint64_t>(v) & 0xff; };
    return (static_cast<std::uint64_t>(plane) << 32) | (u(from.x) << 24) | (u(from.y) << 16) |
           (u(to.x) << 8) | u(to.y);
}

}  // namespace

Mesh::Mesh(MeshDims dims, NocParams params) : dims_(dims), params_(params) {
    if (dims.cols < 1 || dims.rows < 1) throw ConfigError("mesh dimensions must be positive");
    if (params.queue_depth < 1) throw ConfigError("queue_depth must be >= 1");
    if (params.router_latency < 1) throw ConfigError("router_latency must be >= 1");
    if (params.max_packet_words < 1) throw ConfigError("max_packet_words must be >= 1");
    routers_.resize(static_cast<std::size_t>(dims.cols) * dims.rows * kPlaneCount);
}

int Mesh::output_for(Coord here, Coord dst) const {
    if (here.x < dst.x) return kEast;
    if (here.x > dst.x) return kWest;
    if (here.y < dst.y) return kSouth;
    if (here.y > dst.y) return kNorth;
    return kLocal;
}

Coord Mesh::neighbor(Coord here, int out) const {
    switch (out) {
        case kNorth: return {here.x, here.y - 1};
        case kSouth: return {here.x, here.y + 1};
        case kEast: return {here.x + 1, here.y};
        case kWest: return {here.x - 1, here.y};
        default: return here;
    }
}

int Mesh::entry_port(int out) {
    switch (out) {
        case kNorth: return kSouth;
        case kSouth: return kNorth;
        case kEast: return kWest;
        case kWest: return kEast;
        default: return kLocal;
    }
}

void Mesh::push_flit(RouterPlane& target, int port, Flit f) {
    target.in[port].push_back(f);
    target.queued++;
    auto occ = static_cast<std::uint32_t>(target.in[port].size());
    if (occ > max_occupancy_) max_occupancy_ = occ;
    assert(occ <= params_.queue_depth);
}

bool Mesh::inject(Packet&& pkt, Coord at, Cycle cycle) {
    if (at != pkt.src) throw SimError("inject: packet injected away from its source tile");
    if (!dims_.contains(pkt.src) || !dims_.contains(pkt.dst)) {
        throw ConfigError("inject: endpoint out of mesh bounds");
    }
    if (pkt.length() > params_.max_packet_words) {
        throw SimError("inject: packet exceeds max_packet_words");
    }
    const int plane = static_cast<int>(pkt.plane());
    RouterPlane& r = rp(at, plane);
    if (r.ser_next < r.ser_total || cycle < r.ser_free_at) return false;  // port busy
    if (r.in[kLocal].size() >= params_.queue_depth) return false;         // no room for header

    const std::uint32_t id = next_pkt_id_++;
    const std::uint32_t flits = pkt.flit_count();
    PacketRec rec;
    rec.pkt = std::move(pkt);
    rec.flits = flits;
    packets_.emplace(id, std::move(rec));

    push_flit(r, kLocal, Flit{id, 0, cycle});
    flits_injected_++;
    active_flits_[plane] += flits;
    r.ser_pkt = id;
    r.ser_next = 1;
    r.ser_total = flits;
    if (r.ser_next >= r.ser_total) r.ser_free_at = cycle + 1;
    return true;
}

bool Mesh::serializer_busy(Coord at, Plane plane) const {
    const RouterPlane& r = rp(at, static_cast<int>(plane));
    return r.ser_next < r.ser_total;
}

// Returns -1 when nothing moved, 0 for a body flit, 1 when the tail moved.
bool Mesh::try_move(Coord here, int plane, int out, int in, Cycle cycle,
                    const std::vector<std::uint32_t>& occ, std::vector<Delivery>& delivered) {
    RouterPlane& r = rp(here, plane);
    auto& q = r.in[in];
    if (q.empty()) return false;
    Flit f = q.front();
    const Cycle lat = (out == kLocal) ? 1 : params_.router_latency;
    if (f.arrival + lat > cycle) return false;

    auto it = packets_.find(f.pkt);
    assert(it != packets_.end());
    PacketRec& rec = it->second;
    const bool tail = (f.idx + 1 == rec.flits);

    if (out == kLocal) {
        q.pop_front();
        r.queued--;
        flits_delivered_++;
        active_flits_[plane]--;
        if (tail) {
            Delivery d;
            d.packet = std::move(rec.pkt);
            d.at = here;
            d.cycle = cycle;
            d.route_taken = std::move(rec.trace);
            delivered.push_back(std::move(d));
            packets_.erase(it);
        }
        return true;
    }

    const Coord next = neighbor(here, out);
    const int entry = entry_port(out);
    if (occ[static_cast<std::size_t>(index_of(next)) * kPortCount + entry] >= params_.queue_depth)
        return false;  // no credit downstream

    q.pop_front();
    r.queued--;
    f.arrival = cycle;
    push_flit(rp(next, plane), entry, f);
    link_flits_[link_key(here, next, plane)]++;
    if (record_routes_ && f.idx == 0) rec.trace.push_back(next);
    return true;
}

std::vector<Delivery> Mesh::step(Cycle cycle) {
    if (stepped_ && cycle <= last_step_cycle_) {
        throw SimError("Mesh::step called with non-increasing cycle");
    }
    stepped_ = true;
    last_step_cycle_ = cycle;

    std::vector<Delivery> delivered;
    const int n_tiles = dims_.cols * dims_.rows;
    std::vector<std::uint32_t> occ;

    for (int plane = 0; plane < kPlaneCount; ++plane) {
        if (active_flits_[plane] == 0) continue;

        // Local ports feed one flit per cycle into the fabric.
        for (int t = 0; t < n_tiles; ++t) {
            RouterPlane& r = routers_[static_cast<std::size_t>(t) * kPlaneCount + plane];
            if (r.ser_next < r.ser_total && r.in[kLocal].size() < params_.queue_depth) {
                push_flit(r, kLocal, Flit{r.ser_pkt, r.ser_next, cycle});
                flits_injected_++;
                r.ser_next++;
                if (r.ser_next >= r.ser_total) r.ser_free_at = cycle + 1;
            }
        }

        // Credits are judged against start-of-cycle occupancy.
        occ.assign(static_cast<std::size_t>(n_tiles) * kPortCount, 0);
        for (int t = 0; t < n_tiles; ++t) {
            const RouterPlane& r = routers_[static_cast<std::size_t>(t) * kPlaneCount + plane];
            for (int p = 0; p < kPortCount; ++p) {
                occ[static_cast<std::size_t>(t) * kPortCount + p] =
                    static_cast<std::uint32_t>(r.in[p].size());
            }
        }

        for (int y = 0; y < dims_.rows; ++y) {
            for (int x = 0; x < dims_.cols; ++x) {
                const Coord here{x, y};
                RouterPlane& r = rp(here, plane);
                if (r.queued == 0) continue;
                for (int out = 0; out < kPortCount; ++out) {
                    OutputState& os = r.out[out];
                    if (os.locked_input >= 0) {
                        auto& q = r.in[os.locked_input];
                        if (q.empty()) continue;
                        assert(q.front().pkt == os.locked_pkt);
                        const bool tail =
                            q.front().idx + 1 == packets_.find(q.front().pkt)->second.flits;
                        if (try_move(here, plane, out, os.locked_input, cycle, occ, delivered) &&
                            tail) {
                            os.locked_input = -1;
                        }
                        continue;
                    }
                    for (int i = 0; i < kPortCount; ++i) {
                        const int in = static_cast<int>((os.rr + i) % kPortCount);
                        auto& q = r.in[in];
                        if (q.empty() || q.front().idx != 0) continue;
                        const PacketRec& rec = packets_.find(q.front().pkt)->second;
                        if (output_for(here, rec.pkt.dst) != out) continue;
                        const std::uint32_t pkt_id = q.front().pkt;
                        const bool multi = rec.flits > 1;
                        if (try_move(here, plane, out, in, cycle, occ, delivered)) {
                            os.rr = static_cast<std::uint32_t>((in + 1) % kPortCount);
                            if (multi) {
                                os.locked_input = in;
                                os.locked_pkt = pkt_id;
                            }
                            break;
                        }
                    }
                }
            }
        }
    }
    return delivered;
}

std::uint64_t Mesh::queued_flits() const {
    std::uint64_t total = 0;
    for (const auto& r : routers_) total += r.queued;
    return total;
}

std::uint64_t Mesh::link_flits(Coord from, Coord to, Plane plane) const {
    auto it = link_flits_.find(link_key(from, to, static_cast<int>(plane)));
    return it == link_flits_.end() ? 0 : it->second;
}

std::uint64_t Mesh::total_link_flits() const {
    std::uint64_t total = 0;
    for (const auto& [k, v] : link_flits_) total += v;
    return total;
}

std::vector<LinkFlitCount> Mesh::link_flit_counts() const {
    std::vector<LinkFlitCount> out;
    out.reserve(link_flits_.size());
    for (const auto& [k, v] : link_flits_) {
        LinkFlitCount c;
        c.plane = static_cast<Plane>((k >> 32) & 0xff);
        c.from = {static_cast<int>((k >> 24) & 0xff), static_cast<int>((k >> 16) & 0xff)};
        c.to = {static_cast<int>((k >> 8) & 0xff), static_cast<int>(k & 0xff)};
        c.flits = v;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const LinkFlitCount& a, const LinkFlitCount& b) {
        if (a.plane != b.plane) return a.plane < b.plane;
        if (!(a.from == b.from)) return a.from < b.from;
        return a.to < b.to;
    });
    return out;
}

}  // namespace tilesim
