// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#include "tilesim/tiles.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace tilesim {

const char* to_string(TileKind k) {
    switch (k) {
        case TileKind::Processor: return "processor";
        case TileKind::Memory: return "memory";
        case TileKind::Accelerator: return "accelerator";
        case TileKind::Auxiliary: return "auxiliary";
    }
    return "?";
}

TileKind tile_kind_from_string(const std::string& s) {
    if (s == "processor") return TileKind::Processor;
    if (s == "memory") return TileKind::Memory;
    if (s == "accelerator") return TileKind::Accelerator;
    if (s == "auxiliary") return TileKind::Auxiliary;
    throw ConfigError("unknown tile kind: " + s);
}

std::uint64_t pack_p2p(const P2pConfig& cfg) {
    if (cfg.load_enabled && (cfg.n_sources < 1 || cfg.n_sources > 4)) {
        throw ConfigError("p2p load needs 1 to 4 source tiles");
    }
    if (cfg.n_consumers > 15) throw ConfigError("p2p store supports at most 15 consumers");
    std::uint64_t v = 0;
    if (cfg.store_enabled) v |= 1ull;
    if (cfg.load_enabled) v |= 2ull;
    if (cfg.round_robin) v |= 4ull;
    v |= static_cast<std::uint64_t>(cfg.n_sources & 0x7) << 4;
    v |= static_cast<std::uint64_t>(cfg.n_consumers & 0xf) << 8;
    for (int i = 0; i < cfg.n_sources; ++i) {
        const Coord c = cfg.sources[i];
        if (c.x < 0 || c.x >= 64 || c.y < 0 || c.y >= 64) {
            throw ConfigError("p2p source coordinate does not fit the register layout");
        }
        v |= (static_cast<std::uint64_t>(c.x) | (static_cast<std::uint64_t>(c.y) << 6))
             << (16 + 12 * i);
    }
    return v;
}

P2pConfig unpack_p2p(std::uint64_t v) {
    P2pConfig cfg;
    cfg.store_enabled = v & 1;
    cfg.load_enabled = v & 2;
    cfg.round_robin = v & 4;
    cfg.n_sources = static_cast<std::uint8_t>((v >> 4) & 0x7);
    cfg.n_consumers = static_cast<std::uint8_t>((v >> 8) & 0xf);
    for (int i = 0; i < cfg.n_sources && i < 4; ++i) {
        const std::uint64_t s = v >> (16 + 12 * i);
        cfg.sources[i] = {static_cast<int>(s & 0x3f), static_cast<int>((s >> 6) & 0x3f)};
    }
    return cfg;
}

// ---------------------------------------------------------------- memory

MemoryTile::MemoryTile(Coord coord, DramParams params, Mesh* mesh)
    : coord_(coord), params_(params), mesh_(mesh), dram_(params.words, 0) {
    if (params.bandwidth < 1) throw ConfigError("dram bandwidth must be >= 1 word/cycle");
}

void MemoryTile::on_packet(Packet&& p, Cycle cycle) {
    if (p.type != MsgType::DmaLoadReq && p.type != MsgType::DmaStore) {
        throw SimError(std::string("memory tile cannot serve ") + to_string(p.type));
    }
    const std::uint64_t words = (p.type == MsgType::DmaLoadReq) ? p.meta.size : p.length();
    const Cycle start = std::max(cycle, channel_free_);
    const Cycle busy = (words + params_.bandwidth - 1) / params_.bandwidth;
    channel_free_ = start + busy;
    service_.push_back(Pending{std::move(p), channel_free_ + params_.latency});
}

bool MemoryTile::step(Cycle cycle) {
    bool progress = false;
    while (!service_.empty() && service_.front().ready <= cycle) {
        Pending pend = std::move(service_.front());
        service_.pop_front();
        Packet& req = pend.req;
        const bool is_load = req.type == MsgType::DmaLoadReq;
        const std::uint64_t words = is_load ? req.meta.size : req.length();
        const bool in_bounds = req.meta.address + words <= dram_.size();

        PacketMeta meta = req.meta;
        meta.error = !in_bounds;
        std::vector<Word> payload;
        if (in_bounds) {
            if (is_load) {
                payload.assign(dram_.begin() + static_cast<std::ptrdiff_t>(req.meta.address),
                               dram_.begin() +
                                   static_cast<std::ptrdiff_t>(req.meta.address + words));
                read_words_ += words;
            } else {
                std::copy(req.payload.begin(), req.payload.end(),
                          dram_.begin() + static_cast<std::ptrdiff_t>(req.meta.address));
                write_words_ += words;
            }
        }
        outbox_.push_back(make_packet(is_load ? MsgType::DmaLoadRsp : MsgType::DmaStoreAck,
                                      coord_, req.src, meta, std::move(payload)));
        progress = true;
    }
    if (!outbox_.empty() && mesh_->inject(std::move(outbox_.front()), coord_, cycle)) {
        outbox_.pop_front();
        progress = true;
    }
    return progress;
}

Word MemoryTile::read_word(std::uint64_t addr) const {
    if (addr >= dram_.size()) throw SimError("host DRAM read out of bounds");
    return dram_[addr];
}

void MemoryTile::write_word(std::uint64_t addr, Word value) {
    if (addr >= dram_.size()) throw SimError("host DRAM write out of bounds");
    dram_[addr] = value;
}

std::vector<Word> MemoryTile::read_block(std::uint64_t addr, std::uint64_t count) const {
    if (addr + count > dram_.size()) throw SimError("host DRAM read out of bounds");
    return {dram_.begin() + static_cast<std::ptrdiff_t>(addr),
            dram_.begin() + static_cast<std::ptrdiff_t>(addr + count)};
}

void MemoryTile::write_block(std::uint64_t addr, const std::vector<Word>& data) {
    if (addr + data.size() > dram_.size()) throw SimError("host DRAM write out of bounds");
    std::copy(data.begin(), data.end(), dram_.begin() + static_cast<std::ptrdiff_t>(addr));
}

void MemoryTile::zero_block(std::uint64_t addr, std::uint64_t count) {
    if (addr + count > dram_.size()) throw SimError("host DRAM zero out of bounds");
    std::fill(dram_.begin() + static_cast<std::ptrdiff_t>(addr),
              dram_.begin() + static_cast<std::ptrdiff_t>(addr + count), 0);
}

// ------------------------------------------------------------- processor

bool ProcessorTile::step(Cycle cycle) {
    if (!outbox_.empty() && mesh_->inject(std::move(outbox_.front()), coord_, cycle)) {
        outbox_.pop_front();
        return true;
    }
    return false;
}

std::vector<Packet> ProcessorTile::drain_inbox() {
    std::vector<Packet> out(std::make_move_iterator(inbox_.begin()),
                            std::make_move_iterator(inbox_.end()));
    inbox_.clear();
    return out;
}

// ------------------------------------------------------------ accelerator

AcceleratorTile::AcceleratorTile(const TileDescriptor& desc, Coord mem, Coord irq_dst,
                                 Kernel kernel, Mesh* mesh)
    : coord_(desc.coord),
      mem_coord_(mem),
      irq_dst_(irq_dst),
      name_(desc.name),
      kernel_(std::move(kernel)),
      mesh_(mesh) {
    KernelTuning def{};
    std::uint32_t in_def = 0;
    for (auto w : kernel_.input_segments(def)) in_def += w;
    in_cap_ = desc.in_capacity ? desc.in_capacity : in_def;
    out_cap_ = desc.out_capacity ? desc.out_capacity : kernel_.output_words(def);
    in_buf_.assign(in_cap_, 0);
    regs_[static_cast<std::size_t>(Reg::StoreDma)] = 1;
    regs_[static_cast<std::size_t>(Reg::ChunkStride)] = 1;
    regs_[static_cast<std::size_t>(Reg::AddrStride)] = 1;
}

std::uint64_t AcceleratorTile::peek_reg(Reg r) const { return read_reg(r); }

void AcceleratorTile::poke_reg(Reg r, std::uint64_t v, Cycle cycle) { write_reg(r, v, cycle); }

std::uint64_t AcceleratorTile::read_reg(Reg r) const {
    switch (r) {
        case Reg::Status:
            return static_cast<std::uint64_t>(state_) |
                   (rejected_write_ ? kStatusRejectedWrite : 0);
        case Reg::Location:
            return pack_location(coord_);
        default:
            return regs_[static_cast<std::size_t>(r)];
    }
}

void AcceleratorTile::write_reg(Reg r, std::uint64_t v, Cycle cycle) {
    if (r == Reg::Cmd) {
        handle_cmd(v, cycle);
        return;
    }
    if (r == Reg::Status || r == Reg::Location || state_ != AccelState::Idle) {
        rejected_write_ = true;  // read-only target or not Idle
        return;
    }
    regs_[static_cast<std::size_t>(r)] = v;
}

void AcceleratorTile::handle_cmd(std::uint64_t v, Cycle cycle) {
    if (v == 1) {
        if (state_ == AccelState::Idle) {
            start_run(cycle);
        } else {
            rejected_write_ = true;
        }
        return;
    }
    if (v == 0) {
        if (state_ == AccelState::Running) {
            rejected_write_ = true;  // no mid-run abort
            return;
        }
        assert(!staged_.has_value());
        state_ = AccelState::Idle;
        phase_ = Phase::Idle;
        rejected_write_ = false;
        return;
    }
    rejected_write_ = true;
}

void AcceleratorTile::fail(const std::string& reason, Cycle cycle) {
    error_reason_ = reason;
    state_ = AccelState::Error;
    phase_ = Phase::Halted;
    staged_.reset();
    send_interrupt(cycle);
}

void AcceleratorTile::finish_run(Cycle cycle) {
    state_ = AccelState::Done;
    phase_ = Phase::Done;
    send_interrupt(cycle);
}

void AcceleratorTile::send_interrupt(Cycle) {
    PacketMeta meta;
    meta.value = static_cast<std::uint64_t>(state_);
    meta.error = (state_ == AccelState::Error);
    outbox_ctl_.push_back(make_packet(MsgType::Interrupt, coord_, irq_dst_, meta));
}

void AcceleratorTile::start_run(Cycle cycle) {
    const std::uint64_t conf_size = regs_[static_cast<std::size_t>(Reg::ConfSize)];
    if (conf_size == 0) {
        fail("CONF_SIZE is zero", cycle);
        return;
    }
    tuning_ = KernelTuning{};
    tuning_.alpha = regs_[static_cast<std::size_t>(Reg::Alpha)];
    tuning_.reuse_factor = regs_[static_cast<std::size_t>(Reg::ReuseFactor)];
    tuning_.out_words = regs_[static_cast<std::size_t>(Reg::OutWords)];
    for (int i = 0; i < kMaxSegments; ++i) {
        tuning_.seg_words[i] = regs_[static_cast<std::size_t>(Reg::SegWords0) + i];
    }

    const auto want = kernel_.input_segments(tuning_);
    if (want.empty() || want.size() > kMaxSegments) {
        fail("kernel segment layout is invalid", cycle);
        return;
    }
    p2p_ = unpack_p2p(regs_[static_cast<std::size_t>(Reg::P2p)]);
    if (p2p_.load_enabled && (p2p_.n_sources < 1 || p2p_.n_sources > 4)) {
        fail("p2p load needs 1 to 4 sources", cycle);
        return;
    }

    segs_.clear();
    std::uint32_t off = 0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        const std::uint64_t reg_w = regs_[static_cast<std::size_t>(Reg::SegWords0) + i];
        if (reg_w != 0 && reg_w != want[i]) {
            fail("segment width disagrees with the kernel shape", cycle);
            return;
        }
        SegState s;
        s.words = want[i];
        const std::uint64_t src = regs_[static_cast<std::size_t>(Reg::SegSrc0) + i];
        if (src != kSegSrcDma) {
            if (!p2p_.load_enabled || src > p2p_.n_sources) {
                fail("segment names a p2p source that is not configured", cycle);
                return;
            }
            s.p2p = true;
            s.src_idx = static_cast<std::uint8_t>(src - 1);
        } else {
            s.src_offset = regs_[static_cast<std::size_t>(Reg::SrcOffset0) + i];
        }
        s.buf_off = off;
        off += s.words;
        segs_.push_back(s);
    }
    chunk_in_words_ = off;
    if (chunk_in_words_ == 0 || chunk_in_words_ > in_cap_) {
        fail("chunk does not fit the input buffer", cycle);
        return;
    }
    if (p2p_.round_robin && (segs_.size() != 1 || !segs_[0].p2p)) {
        fail("round-robin load needs a single p2p segment", cycle);
        return;
    }
    out_chunk_words_ = kernel_.output_words(tuning_);
    if (out_chunk_words_ == 0 || out_chunk_words_ > out_cap_) {
        fail("chunk does not fit the output buffer", cycle);
        return;
    }
    if (conf_size % chunk_in_words_ != 0) {
        fail("CONF_SIZE is not a whole number of chunks", cycle);
        return;
    }
    n_chunks_ = (conf_size + chunk_in_words_ - 1) / chunk_in_words_;
    chunk_base_ = regs_[static_cast<std::size_t>(Reg::ChunkBase)];
    chunk_stride_ = std::max<std::uint64_t>(1, regs_[static_cast<std::size_t>(Reg::ChunkStride)]);
    addr_stride_ = std::max<std::uint64_t>(1, regs_[static_cast<std::size_t>(Reg::AddrStride)]);
    dma_store_ = regs_[static_cast<std::size_t>(Reg::StoreDma)] != 0;
    if (!dma_store_ && !p2p_.store_enabled) {
        fail("store has no destination", cycle);
        return;
    }

    state_ = AccelState::Running;
    phase_ = Phase::Load;
    cur_chunk_ = 0;
    begin_chunk();
}

void AcceleratorTile::begin_chunk() {
    for (auto& s : segs_) {
        s.received = 0;
        s.requested = false;
    }
    dma_seg_ = 0;
    dma_seg_done_ = 0;
    dma_outstanding_ = false;
    p2p_reqs_issued_ = false;
    store_done_ = 0;
    store_ack_wait_ = false;
    store_staged_ = false;
}

bool AcceleratorTile::translate(std::uint64_t offset, std::uint64_t count, std::uint64_t* phys,
                                Cycle cycle) {
    const std::uint64_t bound = regs_[static_cast<std::size_t>(Reg::TlbBound)];
    if (offset + count > bound) {
        fail("access outside the TLB window", cycle);
        return false;
    }
    *phys = regs_[static_cast<std::size_t>(Reg::TlbBase)] + offset;
    return true;
}

void AcceleratorTile::on_packet(Packet&& p, Cycle cycle) {
    switch (p.type) {
        case MsgType::ConfigWrite:
            write_reg(static_cast<Reg>(p.meta.reg), p.meta.value, cycle);
            return;
        case MsgType::ConfigRead: {
            PacketMeta meta;
            meta.reg = p.meta.reg;
            meta.value = read_reg(static_cast<Reg>(p.meta.reg));
            outbox_ctl_.push_back(make_packet(MsgType::ConfigReadRsp, coord_, p.src, meta));
            return;
        }
        case MsgType::DmaLoadRsp: {
            if (p.meta.error) {
                fail("DMA load error from the memory tile", cycle);
                return;
            }
            if (phase_ != Phase::Load || !dma_outstanding_ || dma_seg_ >= segs_.size()) {
                throw SimError(name_ + ": unexpected DmaLoadRsp");
            }
            SegState& s = segs_[dma_seg_];
            if (p.length() != dma_burst_words_ ||
                s.buf_off + dma_seg_done_ + p.length() > in_buf_.size()) {
                throw SimError(name_ + ": DMA load burst size mismatch");
            }
            std::copy(p.payload.begin(), p.payload.end(),
                      in_buf_.begin() + s.buf_off + dma_seg_done_);
            dma_seg_done_ += p.length();
            s.received += p.length();
            dma_outstanding_ = false;
            received_this_cycle_ = true;
            return;
        }
        case MsgType::DmaStoreAck:
            if (p.meta.error) {
                fail("DMA store error from the memory tile", cycle);
                return;
            }
            if (phase_ != Phase::Store || !store_ack_wait_) {
                throw SimError(name_ + ": unexpected DmaStoreAck");
            }
            store_ack_wait_ = false;
            store_done_ += dma_burst_words_;
            received_this_cycle_ = true;
            return;
        case MsgType::P2pLoadReq:
            pending_reqs_.push_back(std::move(p));
            return;
        case MsgType::P2pLoadRsp: {
            if (phase_ != Phase::Load) throw SimError(name_ + ": unexpected P2pLoadRsp");
            SegState* seg = nullptr;
            if (p2p_.round_robin) {
                seg = &segs_[0];
            } else {
                for (auto& s : segs_) {
                    if (s.p2p && p2p_.sources[s.src_idx] == p.src && s.received < s.words) {
                        seg = &s;
                        break;
                    }
                }
            }
            if (seg == nullptr || !seg->requested) {
                throw SimError(name_ + ": P2pLoadRsp without a matching request");
            }
            if (p.meta.chunk_id != global_chunk() ||
                seg->received + p.length() > seg->words) {
                throw SimError(name_ + ": p2p response does not match the requested chunk");
            }
            std::copy(p.payload.begin(), p.payload.end(),
                      in_buf_.begin() + seg->buf_off + seg->received);
            seg->received += p.length();
            received_this_cycle_ = true;
            return;
        }
        default:
            throw SimError(name_ + ": cannot handle " + to_string(p.type));
    }
}

bool AcceleratorTile::step_load(Cycle cycle) {
    bool progress = false;

    if (!p2p_reqs_issued_) {
        std::uint32_t wanted = 0;
        for (const auto& s : segs_) {
            if (s.p2p) wanted += p2p_.round_robin ? chunk_in_words_ : s.words;
        }
        if (wanted == 0) {
            p2p_reqs_issued_ = true;
        } else if (wanted + in_buf_reserved_ <= in_cap_) {
            // Consumption assumption: only request what fits locally.
            if (p2p_.round_robin) {
                const Coord src =
                    p2p_.sources[global_chunk() % std::max<std::uint64_t>(1, p2p_.n_sources)];
                PacketMeta meta;
                meta.size = chunk_in_words_;
                meta.chunk_id = static_cast<std::uint32_t>(global_chunk());
                outbox_req_.push_back(make_packet(MsgType::P2pLoadReq, coord_, src, meta));
                segs_[0].requested = true;
            } else {
                for (auto& s : segs_) {
                    if (!s.p2p) continue;
                    PacketMeta meta;
                    meta.size = s.words;
                    meta.chunk_id = static_cast<std::uint32_t>(global_chunk());
                    outbox_req_.push_back(
                        make_packet(MsgType::P2pLoadReq, coord_, p2p_.sources[s.src_idx], meta));
                    s.requested = true;
                }
            }
            p2p_reqs_issued_ = true;
            progress = true;
        }
    }

    if (!dma_outstanding_) {
        while (dma_seg_ < segs_.size() &&
               (segs_[dma_seg_].p2p || segs_[dma_seg_].received >= segs_[dma_seg_].words)) {
            dma_seg_++;
            dma_seg_done_ = 0;
        }
        if (dma_seg_ < segs_.size()) {
            SegState& s = segs_[dma_seg_];
            const std::uint32_t burst =
                std::min(s.words - dma_seg_done_, mesh_->params().max_packet_words);
            std::uint64_t phys = 0;
            const std::uint64_t offset =
                s.src_offset + dma_chunk_index() * s.words + dma_seg_done_;
            if (!translate(offset, burst, &phys, cycle)) return true;
            PacketMeta meta;
            meta.address = phys;
            meta.size = burst;
            meta.chunk_id = static_cast<std::uint32_t>(global_chunk());
            outbox_req_.push_back(make_packet(MsgType::DmaLoadReq, coord_, mem_coord_, meta));
            dma_outstanding_ = true;
            dma_burst_words_ = burst;
            progress = true;
        }
    }

    bool complete = !dma_outstanding_;
    const std::uint32_t want_rr = p2p_.round_robin ? chunk_in_words_ : 0;
    for (const auto& s : segs_) {
        const std::uint32_t want = s.p2p && p2p_.round_robin ? want_rr : s.words;
        if (s.received < want) complete = false;
    }
    if (complete) {
        phase_ = Phase::Compute;
        compute_remaining_ = kernel_.compute_cycles(tuning_, chunk_in_words_);
        progress = true;
    }
    return progress;
}

void AcceleratorTile::serve_p2p_requests(Cycle) {
    if (!staged_.has_value()) return;
    for (auto it = pending_reqs_.begin(); it != pending_reqs_.end();) {
        if (it->meta.chunk_id != staged_->chunk_id) {
            if (it->meta.chunk_id < staged_->chunk_id) {
                throw SimError(name_ + ": p2p request for an already retired chunk");
            }
            ++it;
            continue;
        }
        if (it->meta.size != staged_->data.size()) {
            throw SimError(name_ + ": p2p request size does not match the staged chunk");
        }
        const std::uint32_t max_words = mesh_->params().max_packet_words;
        std::uint32_t off = 0;
        const auto total = static_cast<std::uint32_t>(staged_->data.size());
        while (off < total) {
            const std::uint32_t burst = std::min(total - off, max_words);
            PacketMeta meta;
            meta.size = burst;
            meta.chunk_id = static_cast<std::uint32_t>(staged_->chunk_id);
            meta.last = off + burst >= total;
            outbox_rsp_.push_back(make_packet(
                MsgType::P2pLoadRsp, coord_, it->src, meta,
                std::vector<Word>(staged_->data.begin() + off,
                                  staged_->data.begin() + off + burst)));
            off += burst;
        }
        staged_->refs--;
        it = pending_reqs_.erase(it);
        if (staged_->refs == 0) {
            staged_.reset();
            break;
        }
    }
}

bool AcceleratorTile::step_store(Cycle cycle) {
    bool progress = false;

    if (p2p_.store_enabled && !store_staged_) {
        StagedChunk st;
        st.chunk_id = global_chunk();
        st.data = out_data_;
        st.refs = std::max<std::uint32_t>(1, p2p_.n_consumers);
        staged_ = std::move(st);
        store_staged_ = true;
        progress = true;
    }
    if (staged_.has_value()) serve_p2p_requests(cycle);

    if (dma_store_ && !store_ack_wait_ && store_done_ < out_chunk_words_) {
        const std::uint32_t burst =
            std::min(out_chunk_words_ - store_done_, mesh_->params().max_packet_words);
        std::uint64_t phys = 0;
        const std::uint64_t offset = regs_[static_cast<std::size_t>(Reg::DstOffset)] +
                                     dma_chunk_index() * out_chunk_words_ + store_done_;
        if (!translate(offset, burst, &phys, cycle)) return true;
        PacketMeta meta;
        meta.address = phys;
        meta.size = burst;
        meta.chunk_id = static_cast<std::uint32_t>(global_chunk());
        outbox_req_.push_back(
            make_packet(MsgType::DmaStore, coord_, mem_coord_, meta,
                        std::vector<Word>(out_data_.begin() + store_done_,
                                          out_data_.begin() + store_done_ + burst)));
        store_ack_wait_ = true;
        dma_burst_words_ = burst;
        progress = true;
    }

    const bool dma_done = !dma_store_ || (store_done_ >= out_chunk_words_ && !store_ack_wait_);
    const bool p2p_done = !p2p_.store_enabled ||
                          (!staged_.has_value() && outbox_rsp_.empty() &&
                           !mesh_->serializer_busy(coord_, Plane::DmaRsp));
    if (dma_done && p2p_done) {
        chunks_done_++;
        cur_chunk_++;
        if (cur_chunk_ < n_chunks_) {
            phase_ = Phase::Load;
            begin_chunk();
        } else {
            finish_run(cycle);
        }
        progress = true;
    }
    return progress;
}

bool AcceleratorTile::step(Cycle cycle) {
    bool progress = false;

    if (!outbox_req_.empty() && mesh_->inject(std::move(outbox_req_.front()), coord_, cycle)) {
        outbox_req_.pop_front();
        progress = true;
    }
    if (!outbox_rsp_.empty() && mesh_->inject(std::move(outbox_rsp_.front()), coord_, cycle)) {
        outbox_rsp_.pop_front();
        progress = true;
    }
    if (!outbox_ctl_.empty() && mesh_->inject(std::move(outbox_ctl_.front()), coord_, cycle)) {
        outbox_ctl_.pop_front();
        progress = true;
    }

    switch (phase_) {
        case Phase::Load:
            progress |= step_load(cycle);
            break;
        case Phase::Compute:
            if (compute_remaining_ > 0) {
                compute_remaining_--;
                progress = true;
            }
            if (compute_remaining_ == 0 && phase_ == Phase::Compute) {
                out_data_ = kernel_.apply(
                    tuning_, std::span<const Word>(in_buf_.data(), chunk_in_words_));
                if (out_data_.size() != out_chunk_words_) {
                    throw SimError(name_ + ": kernel output width mismatch");
                }
                phase_ = Phase::Store;
                progress = true;
            }
            break;
        case Phase::Store:
            progress |= step_store(cycle);
            break;
        default:
            break;
    }

    const bool busy = phase_ == Phase::Compute || dma_outstanding_ || store_ack_wait_ ||
                      received_this_cycle_ || !outbox_rsp_.empty() ||
                      mesh_->serializer_busy(coord_, Plane::DmaRsp);
    if (busy) busy_cycles_++;
    progress |= received_this_cycle_;
    received_this_cycle_ = false;
    return progress;
}

std::string AcceleratorTile::debug_state() const {
    std::ostringstream os;
    os << name_ << "@" << to_string(coord_) << " phase=";
    switch (phase_) {
        case Phase::Idle: os << "idle"; break;
        case Phase::Load: os << "load"; break;
        case Phase::Compute: os << "compute"; break;
        case Phase::Store: os << "store"; break;
        case Phase::Done: os << "done"; break;
        case Phase::Halted: os << "halted(" << error_reason_ << ")"; break;
    }
    if (state_ == AccelState::Running) {
        os << " chunk " << cur_chunk_ << "/" << n_chunks_ << " (global " << global_chunk()
           << ")";
    }
    if (phase_ == Phase::Load) {
        for (const auto& s : segs_) {
            if (s.p2p && s.requested && s.received < s.words) {
                os << " waiting-on-source=" << to_string(p2p_.sources[s.src_idx]) << " ("
                   << s.received << "/" << s.words << " words)";
            }
        }
    }
    if (staged_.has_value()) {
        os << " staged-chunk=" << staged_->chunk_id << " unconsumed-refs=" << staged_->refs;
    }
    for (const auto& r : pending_reqs_) {
        os << " pending-request(from=" << to_string(r.src) << ", chunk=" << r.meta.chunk_id
           << ")";
    }
    return os.str();
}

}  // namespace tilesim
