// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_TILES_HPP
#define TILESIM_TILES_HPP

#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tilesim/kernels.hpp"
#include "tilesim/noc.hpp"
#include "tilesim/registers.hpp"

namespace tilesim {

enum class TileKind { Processor, Memory, Accelerator, Auxiliary };

const char* to_string(TileKind k);
TileKind tile_kind_from_string(const std::string& s);

struct TileDescriptor {
    Coord coord{};
    TileKind kind = TileKind::Auxiliary;
    std::string name;    // device name; accelerator tiles only
    std::string kernel;  // kernel name; accelerator tiles only
    std::string model;   // model file path, resolved; optional
    int dense_layer = 0;
    std::uint64_t alpha = 0;  // 0 = kernel default
    std::uint32_t reuse_factor = 16;
    std::uint32_t pipeline_depth = 8;
    std::uint32_t in_capacity = 0;   // 0 = derive from kernel shapes
    std::uint32_t out_capacity = 0;
};

struct DramParams {
    Cycle latency = 100;                 // request-to-data pipeline latency
    std::uint32_t bandwidth = 1;         // words per cycle
    std::uint64_t words = 1ull << 22;    // DRAM size
};

// Memory tile: one DRAM channel with a fixed pipeline latency and a word
// bandwidth limit. Serves DmaLoadReq/DmaStore packets in arrival order and
// counts every word moved; those counters are the DRAM-traffic metric.
class MemoryTile {
public:
    MemoryTile(Coord coord, DramParams params, Mesh* mesh);

    void on_packet(Packet&& p, Cycle cycle);
    bool step(Cycle cycle);  // true when it made progress

    // Host-side access used by the runtime (outside the simulated traffic).
    Word read_word(std::uint64_t addr) const;
    void write_word(std::uint64_t addr, Word value);
    std::vector<Word> read_block(std::uint64_t addr, std::uint64_t count) const;
    void write_block(std::uint64_t addr, const std::vector<Word>& data);
    void zero_block(std::uint64_t addr, std::uint64_t count);

    std::uint64_t dram_read_words() const { return read_words_; }
    std::uint64_t dram_write_words() const { return write_words_; }
    const DramParams& params() const { return params_; }
    Coord coord() const { return coord_; }

private:
    struct Pending {
        Packet req;
        Cycle ready;
    };

    Coord coord_;
    DramParams params_;
    Mesh* mesh_;
    std::vector<Word> dram_;
    std::deque<Pending> service_;   // FIFO, readiest first
    std::deque<Packet> outbox_;     // responses awaiting injection
    Cycle channel_free_ = 0;
    std::uint64_t read_words_ = 0;
    std::uint64_t write_words_ = 0;
};

// Processor tile: endpoint for the runtime. The runtime logic itself runs
// host-side as a zero-latency oracle; this tile only sources its config
// packets and sinks interrupts and read responses.
class ProcessorTile {
public:
    ProcessorTile(Coord coord, Mesh* mesh) : coord_(coord), mesh_(mesh) {}

    void on_packet(Packet&& p, Cycle) { inbox_.push_back(std::move(p)); }
    bool step(Cycle cycle);

    void send(Packet&& p) { outbox_.push_back(std::move(p)); }
    std::vector<Packet> drain_inbox();
    bool quiescent() const { return inbox_.empty() && outbox_.empty(); }
    Coord coord() const { return coord_; }

private:
    Coord coord_;
    Mesh* mesh_;
    std::deque<Packet> inbox_;
    std::deque<Packet> outbox_;
};

// Accelerator tile: the hardware socket around one functional kernel.
// Registers, base+bound address translation, a DMA engine with a single
// outstanding transaction, private in/out buffers, the chunked
// LOAD/COMPUTE/STORE loop and the on-demand p2p send/receive machinery.
class AcceleratorTile {
public:
    enum class Phase {
        Idle,
        Load,
        Compute,
        Store,
        Done,
        Halted,  // error state, interrupt sent
    };

    AcceleratorTile(const TileDescriptor& desc, Coord mem, Coord irq_dst, Kernel kernel,
                    Mesh* mesh);

    void on_packet(Packet&& p, Cycle cycle);
    bool step(Cycle cycle);

    // Direct register access, used by unit tests and the deadlock reporter;
    // the runtime goes through ConfigWrite/ConfigRead packets.
    std::uint64_t peek_reg(Reg r) const;
    void poke_reg(Reg r, std::uint64_t v, Cycle cycle);

    const std::string& name() const { return name_; }
    Coord coord() const { return coord_; }
    KernelKind kernel_kind() const { return kernel_.kind(); }
    const Kernel& kernel() const { return kernel_; }
    Phase phase() const { return phase_; }
    AccelState state() const { return state_; }
    std::uint64_t busy_cycles() const { return busy_cycles_; }
    std::uint64_t chunks_done() const { return chunks_done_; }
    std::uint32_t in_capacity() const { return in_cap_; }
    std::uint32_t out_capacity() const { return out_cap_; }

    std::string debug_state() const;

    // Test hook for the consumption-assumption precondition: marks part of
    // in_buf as occupied so load requests cannot be issued.
    void test_reserve_in_buf(std::uint32_t words) { in_buf_reserved_ = words; }

private:
    struct SegState {
        std::uint32_t words = 0;
        bool p2p = false;
        std::uint8_t src_idx = 0;       // index into p2p sources
        std::uint64_t src_offset = 0;   // DMA: base offset in the TLB window
        std::uint32_t buf_off = 0;      // position in in_buf
        std::uint32_t received = 0;     // p2p words landed
        bool requested = false;
    };

    struct StagedChunk {
        std::uint64_t chunk_id = 0;
        std::vector<Word> data;
        std::uint32_t refs = 0;  // consumers still expected to pull
    };

    void write_reg(Reg r, std::uint64_t v, Cycle cycle);
    std::uint64_t read_reg(Reg r) const;
    void handle_cmd(std::uint64_t v, Cycle cycle);
    void start_run(Cycle cycle);
    void begin_chunk();
    void fail(const std::string& reason, Cycle cycle);
    void finish_run(Cycle cycle);
    bool translate(std::uint64_t offset, std::uint64_t count, std::uint64_t* phys,
                   Cycle cycle);
    std::uint64_t global_chunk() const { return chunk_base_ + cur_chunk_ * chunk_stride_; }
    std::uint64_t dma_chunk_index() const { return cur_chunk_ * addr_stride_; }
    bool step_load(Cycle cycle);
    bool step_store(Cycle cycle);
    void serve_p2p_requests(Cycle cycle);
    void send_interrupt(Cycle cycle);

    Coord coord_;
    Coord mem_coord_;
    Coord irq_dst_;
    std::string name_;
    Kernel kernel_;
    std::uint32_t in_cap_ = 0;
    std::uint32_t out_cap_ = 0;
    Mesh* mesh_;

    RegArray regs_{};
    AccelState state_ = AccelState::Idle;
    bool rejected_write_ = false;
    Phase phase_ = Phase::Idle;

    // Snapshot of one run (taken at CMD).
    std::vector<SegState> segs_;
    std::uint32_t chunk_in_words_ = 0;
    std::uint32_t out_chunk_words_ = 0;
    std::uint64_t n_chunks_ = 0;
    std::uint64_t cur_chunk_ = 0;
    std::uint64_t chunk_base_ = 0;
    std::uint64_t chunk_stride_ = 1;
    std::uint64_t addr_stride_ = 1;
    P2pConfig p2p_{};
    bool dma_store_ = true;
    KernelTuning tuning_{};

    std::vector<Word> in_buf_;
    std::vector<Word> out_data_;
    std::uint32_t in_buf_reserved_ = 0;

    // load progress
    std::size_t dma_seg_ = 0;             // next DMA segment to work on
    std::uint32_t dma_seg_done_ = 0;      // words finished in that segment
    bool dma_outstanding_ = false;
    std::uint32_t dma_burst_words_ = 0;
    bool p2p_reqs_issued_ = false;
    bool received_this_cycle_ = false;

    // compute progress
    std::uint64_t compute_remaining_ = 0;

    // store progress
    std::uint32_t store_done_ = 0;
    bool store_ack_wait_ = false;
    bool store_staged_ = false;

    // p2p sender state
    std::optional<StagedChunk> staged_;
    std::deque<Packet> pending_reqs_;

    std::deque<Packet> outbox_req_;
    std::deque<Packet> outbox_rsp_;
    std::deque<Packet> outbox_ctl_;

    std::uint64_t busy_cycles_ = 0;
    std::uint64_t chunks_done_ = 0;
    std::string error_reason_;
};

}  // namespace tilesim

#endif
