// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#include "tilesim/runtime.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <sstream>

#include "tilesim/rng.hpp"

namespace tilesim {

Mode mode_from_string(const std::string& s) {
    if (s == "serial") return Mode::Serial;
    if (s == "pipe") return Mode::Pipe;
    if (s == "p2p") return Mode::PipeP2p;
    throw ConfigError("mode must be serial, pipe or p2p, got: " + s);
}

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Serial: return "serial";
        case Mode::Pipe: return "pipe";
        case Mode::PipeP2p: return "p2p";
    }
    return "?";
}

Runtime::Runtime(SocSim& sim) : sim_(sim) { probe_registry(); }

void Runtime::trace_line(const std::string& s) {
    if (trace_ != nullptr) {
        trace_->append(s);
        trace_->push_back('\n');
    }
}

void Runtime::probe_registry() {
    // Boot discovery: read every accelerator's LOCATION_REG over the NoC and
    // key the device list by name, so dataflows stay floorplan-independent.
    const auto accels = sim_.accelerators();
    for (AcceleratorTile* a : accels) {
        PacketMeta meta;
        meta.reg = static_cast<std::uint32_t>(Reg::Location);
        sim_.proc().send(
            make_packet(MsgType::ConfigRead, sim_.proc().coord(), a->coord(), meta));
    }
    std::size_t pending = accels.size();
    std::map<std::pair<int, int>, std::uint64_t> located;
    while (pending > 0) {
        sim_.step();
        for (auto& p : sim_.proc().drain_inbox()) {
            if (p.type != MsgType::ConfigReadRsp) {
                throw SimError("unexpected packet during registry probe");
            }
            located[{p.src.x, p.src.y}] = p.meta.value;
            pending--;
        }
        sim_.note_external_progress();
    }
    for (AcceleratorTile* a : accels) {
        auto it = located.find({a->coord().x, a->coord().y});
        if (it == located.end() || unpack_location(it->second) != a->coord()) {
            throw SimError("LOCATION_REG probe mismatch for device " + a->name());
        }
        DeviceInfo info;
        info.name = a->name();
        info.coord = a->coord();
        info.kind = a->kernel_kind();
        info.kernel = &a->kernel();
        info.in_capacity = a->in_capacity();
        info.out_capacity = a->out_capacity();
        registry_.add(std::move(info));
    }
}

BufferHandle Runtime::alloc(std::uint64_t words) {
    if (words == 0) throw ConfigError("alloc: zero-length allocation");
    if (bump_ + words > sim_.memory().params().words) {
        throw ConfigError("alloc: simulated DRAM exhausted");
    }
    BufferHandle h{bump_, words};
    bump_ += words;
    sim_.memory().zero_block(h.base, h.words);
    return h;
}

std::vector<ValidationIssue> Runtime::check(const DataflowGraph& graph,
                                            ValidatedGraph* out) const {
    return validate_dataflow(graph, registry_, out);
}

ValidatedGraph Runtime::validate(const DataflowGraph& graph) const {
    ValidatedGraph out;
    auto issues = check(graph, &out);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return out;
}

namespace {

struct RegWrite {
    Reg reg;
    std::uint64_t value;
};

struct Invocation {
    int node = -1;
    int instance = 0;
    std::uint64_t first_chunk = 0;
    std::uint64_t chunk_stride = 1;
    std::uint64_t n_chunks = 0;
    Coord tile{};
    std::vector<RegWrite> regs;
    int deps_unmet = 0;
    std::vector<int> dependents;
    bool launched = false;
    bool completed = false;
};

struct NodeLayout {
    bool dma_out = false;           // stores to DRAM in this mode
    std::uint64_t out_off = 0;      // arena offset of the output region
    std::uint64_t out_slots = 0;    // frames (full) or 2 (double buffer)
    bool per_frame = false;         // invocation granularity
};

bool pixel_input(KernelKind k) {
    switch (k) {
        case KernelKind::Median:
        case KernelKind::HistKernel:
        case KernelKind::Equalize:
        case KernelKind::Mlp:
        case KernelKind::Denoiser:
            return true;
        default:
            return false;
    }
}

}  // namespace

RunReport Runtime::run(const ValidatedGraph& plan, Mode mode, std::uint64_t frames,
                       std::uint64_t seed) {
    if (frames == 0) {
        throw ValidationError(std::vector<ValidationIssue>{{"frames", "frames must be >= 1"}});
    }
    const DataflowGraph& graph = plan.graph;
    const auto& nodes = plan.nodes;

    auto edge_p2p = [&](int e) {
        return mode == Mode::PipeP2p && graph.edges[static_cast<std::size_t>(e)].mode ==
                                            EdgeMode::P2p;
    };

    // ---- buffer layout inside one contiguous arena -------------------
    std::vector<std::uint64_t> input_off(graph.inputs.size(), 0);
    std::vector<std::uint64_t> output_off(graph.outputs.size(), 0);
    std::vector<NodeLayout> layout(nodes.size());
    std::uint64_t total = 0;

    for (std::size_t b = 0; b < graph.inputs.size(); ++b) {
        const PlanNode& pn = nodes[static_cast<std::size_t>(
            [&] {  // node index of this binding
                for (std::size_t i = 0; i < nodes.size(); ++i) {
                    if (nodes[i].name == graph.inputs[b].node) return static_cast<int>(i);
                }
                return 0;
            }())];
        // width of the segment this binding feeds
        std::uint32_t width = 0;
        for (std::size_t s = 0; s < pn.feeders.size(); ++s) {
            if (!pn.feeders[s].from_edge &&
                pn.feeders[s].input_index == static_cast<int>(b)) {
                width = pn.seg_words[s];
            }
        }
        input_off[b] = total;
        total += frames * width;
    }
    for (std::size_t b = 0; b < graph.outputs.size(); ++b) {
        for (const auto& pn : nodes) {
            if (pn.output_binding == static_cast<int>(b)) {
                output_off[b] = total;
                total += frames * pn.out_words;
            }
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const PlanNode& pn = nodes[i];
        bool dma_edge_out = false;
        for (int e : pn.out_edges) {
            if (!edge_p2p(e)) dma_edge_out = true;
        }
        NodeLayout& nl = layout[i];
        nl.dma_out = dma_edge_out || pn.output_binding != -1;
        if (pn.output_binding != -1) {
            nl.out_off = output_off[static_cast<std::size_t>(pn.output_binding)];
            nl.out_slots = frames;
        } else if (dma_edge_out) {
            nl.out_slots = (mode == Mode::Serial) ? frames : 2;
            nl.out_off = total;
            total += nl.out_slots * pn.out_words;
        }
    }

    const BufferHandle arena = alloc(total);

    // ---- invocation granularity --------------------------------------
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const PlanNode& pn = nodes[i];
        bool touches_dma_edge = false;
        for (int e : pn.out_edges) {
            if (!edge_p2p(e)) touches_dma_edge = true;
        }
        for (const auto& f : pn.feeders) {
            if (f.from_edge && !edge_p2p(f.edge_index)) touches_dma_edge = true;
        }
        switch (mode) {
            case Mode::Serial: layout[i].per_frame = false; break;
            case Mode::Pipe: layout[i].per_frame = true; break;
            case Mode::PipeP2p: layout[i].per_frame = touches_dma_edge; break;
        }
    }

    // ---- input data ----------------------------------------------------
    Rng rng(seed);
    last_inputs_.clear();
    for (std::size_t b = 0; b < graph.inputs.size(); ++b) {
        int ni = -1;
        std::uint32_t width = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t s = 0; s < nodes[i].feeders.size(); ++s) {
                const auto& f = nodes[i].feeders[s];
                if (!f.from_edge && f.input_index == static_cast<int>(b)) {
                    ni = static_cast<int>(i);
                    width = nodes[i].seg_words[s];
                }
            }
        }
        std::vector<Word> data(frames * width);
        const KernelKind kind = nodes[static_cast<std::size_t>(ni)].kernel->kind();
        for (auto& w : data) {
            if (pixel_input(kind)) {
                w = rng.next_below(256);
            } else if (kind == KernelKind::DenseStage) {
                w = static_cast<std::uint16_t>(
                    Fx16::from_double(rng.next_real(-1.0, 1.0)).raw());
            } else {
                w = rng.next_below(1u << 16);
            }
        }
        sim_.memory().write_block(arena.base + input_off[b], data);
        last_inputs_.push_back(std::move(data));
    }

    // ---- invocations ---------------------------------------------------
    std::vector<Invocation> invs;
    // per node: map frame -> invocation id (per-frame nodes), or instance -> id
    std::vector<std::map<std::uint64_t, int>> by_frame(nodes.size());
    std::vector<std::vector<int>> whole_run(nodes.size());

    auto build_regs = [&](const PlanNode& pn, const NodeLayout& nl, std::uint64_t first,
                          std::uint64_t stride, std::uint64_t n) {
        std::vector<RegWrite> w;
        const std::uint32_t chunk_words =
            std::accumulate(pn.seg_words.begin(), pn.seg_words.end(), 0u);
        w.push_back({Reg::Cmd, 0});
        w.push_back({Reg::TlbBase, arena.base});
        w.push_back({Reg::TlbBound, arena.words});
        w.push_back({Reg::ConfSize, n * chunk_words});
        w.push_back({Reg::ChunkBase, first});
        w.push_back({Reg::ChunkStride, stride});
        w.push_back({Reg::AddrStride, stride});
        w.push_back({Reg::OutWords, pn.tuning.out_words});
        w.push_back({Reg::Alpha, pn.tuning.alpha});
        w.push_back({Reg::ReuseFactor, pn.tuning.reuse_factor});
        w.push_back({Reg::StoreDma, nl.dma_out ? 1ull : 0ull});

        int p2p_src_counter = 0;
        for (std::size_t s = 0; s < pn.feeders.size(); ++s) {
            const PlanFeeder& f = pn.feeders[s];
            const bool p2p = f.from_edge && edge_p2p(f.edge_index);
            w.push_back({static_cast<Reg>(static_cast<std::uint32_t>(Reg::SegWords0) + s),
                         pn.seg_words[s]});
            if (p2p) {
                p2p_src_counter++;
                w.push_back({static_cast<Reg>(static_cast<std::uint32_t>(Reg::SegSrc0) + s),
                             static_cast<std::uint64_t>(p2p_src_counter)});
            } else {
                std::uint64_t off = 0;
                if (f.from_edge) {
                    const NodeLayout& pl = layout[static_cast<std::size_t>(f.producer)];
                    const std::uint64_t slot = (pl.out_slots == 2) ? first % 2 : first;
                    off = pl.out_off + slot * pn.seg_words[s];
                } else {
                    off = input_off[static_cast<std::size_t>(f.input_index)] +
                          first * pn.seg_words[s];
                }
                w.push_back({static_cast<Reg>(static_cast<std::uint32_t>(Reg::SegSrc0) + s),
                             kSegSrcDma});
                w.push_back(
                    {static_cast<Reg>(static_cast<std::uint32_t>(Reg::SrcOffset0) + s), off});
            }
        }
        if (nl.dma_out) {
            const std::uint64_t slot = (nl.out_slots == 2) ? first % 2 : first;
            w.push_back({Reg::DstOffset, nl.out_off + slot * pn.out_words});
        }
        if (mode == Mode::PipeP2p) {
            w.push_back({Reg::P2p, pack_p2p(pn.p2p)});
        } else {
            w.push_back({Reg::P2p, 0});
        }
        w.push_back({Reg::Cmd, 1});
        return w;
    };

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const PlanNode& pn = nodes[i];
        const NodeLayout& nl = layout[i];
        if (nl.per_frame) {
            for (std::uint64_t g = 0; g < frames; ++g) {
                Invocation inv;
                inv.node = static_cast<int>(i);
                inv.instance = static_cast<int>(g % pn.instances);
                inv.first_chunk = g;
                inv.chunk_stride = 1;
                inv.n_chunks = 1;
                inv.tile = pn.tiles[static_cast<std::size_t>(inv.instance)];
                inv.regs = build_regs(pn, nl, g, 1, 1);
                by_frame[i][g] = static_cast<int>(invs.size());
                invs.push_back(std::move(inv));
            }
        } else {
            for (int k = 0; k < pn.instances; ++k) {
                const std::uint64_t cnt =
                    (frames > static_cast<std::uint64_t>(k))
                        ? (frames - k + pn.instances - 1) / pn.instances
                        : 0;
                if (cnt == 0) continue;
                Invocation inv;
                inv.node = static_cast<int>(i);
                inv.instance = k;
                inv.first_chunk = static_cast<std::uint64_t>(k);
                inv.chunk_stride = static_cast<std::uint64_t>(pn.instances);
                inv.n_chunks = cnt;
                inv.tile = pn.tiles[static_cast<std::size_t>(k)];
                inv.regs = build_regs(pn, nl, inv.first_chunk, inv.chunk_stride, cnt);
                whole_run[i].push_back(static_cast<int>(invs.size()));
                invs.push_back(std::move(inv));
            }
        }
    }

    auto add_dep = [&](int before, int after) {
        invs[static_cast<std::size_t>(before)].dependents.push_back(after);
        invs[static_cast<std::size_t>(after)].deps_unmet++;
    };

    if (mode == Mode::Serial) {
        // One node at a time, topological order.
        for (std::size_t t = 1; t < plan.topo.size(); ++t) {
            for (int b : whole_run[static_cast<std::size_t>(plan.topo[t - 1])]) {
                for (int a : whole_run[static_cast<std::size_t>(plan.topo[t])]) {
                    add_dep(b, a);
                }
            }
        }
    } else {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!layout[i].per_frame) continue;
            const PlanNode& pn = nodes[i];
            for (std::uint64_t g = 0; g < frames; ++g) {
                const int id = by_frame[i][g];
                if (g >= static_cast<std::uint64_t>(pn.instances)) {
                    add_dep(by_frame[i][g - pn.instances], id);  // same device, in order
                }
                for (const auto& f : pn.feeders) {
                    if (f.from_edge && !edge_p2p(f.edge_index)) {
                        add_dep(by_frame[static_cast<std::size_t>(f.producer)][g], id);
                    }
                }
                // Double-buffer anti-dependency: frame g reuses the slot of
                // frame g-2, which every DMA consumer must have read.
                if (layout[i].out_slots == 2 && g >= 2) {
                    for (int e : pn.out_edges) {
                        if (edge_p2p(e)) continue;
                        int consumer = -1;
                        for (std::size_t c = 0; c < nodes.size(); ++c) {
                            if (nodes[c].name == graph.edges[static_cast<std::size_t>(e)].dst) {
                                consumer = static_cast<int>(c);
                            }
                        }
                        add_dep(by_frame[static_cast<std::size_t>(consumer)][g - 2], id);
                    }
                }
            }
        }
    }

    // ---- run -------------------------------------------------------------
    std::map<std::pair<int, int>, int> running_on;
    std::size_t completed = 0;
    std::size_t launched = 0;

    std::vector<int> ready;
    for (std::size_t id = 0; id < invs.size(); ++id) {
        if (invs[id].deps_unmet == 0) ready.push_back(static_cast<int>(id));
    }

    auto launch = [&](int id) {
        Invocation& inv = invs[static_cast<std::size_t>(id)];
        for (const auto& rw : inv.regs) {
            PacketMeta meta;
            meta.reg = static_cast<std::uint32_t>(rw.reg);
            meta.value = rw.value;
            sim_.proc().send(
                make_packet(MsgType::ConfigWrite, sim_.proc().coord(), inv.tile, meta));
        }
        inv.launched = true;
        running_on[{inv.tile.x, inv.tile.y}] = id;
        launched++;
        trace_line("cycle=" + std::to_string(sim_.cycle()) + " launch node=" +
                   nodes[static_cast<std::size_t>(inv.node)].name + " instance=" +
                   std::to_string(inv.instance) + " first_chunk=" +
                   std::to_string(inv.first_chunk) + " chunks=" + std::to_string(inv.n_chunks));
    };

    while (completed < invs.size()) {
        if (!ready.empty()) {
            std::sort(ready.begin(), ready.end());
            for (int id : ready) launch(id);
            ready.clear();
            sim_.note_external_progress();
        }
        sim_.step();
        for (auto& p : sim_.proc().drain_inbox()) {
            if (p.type != MsgType::Interrupt) continue;
            auto it = running_on.find({p.src.x, p.src.y});
            if (it == running_on.end()) {
                throw SimError("interrupt from a tile with no running invocation");
            }
            Invocation& inv = invs[static_cast<std::size_t>(it->second)];
            if (p.meta.error) {
                AcceleratorTile* a = sim_.accel_at(p.src);
                throw SimError("accelerator error: " +
                               (a ? a->debug_state() : to_string(p.src)));
            }
            inv.completed = true;
            completed++;
            trace_line("cycle=" + std::to_string(sim_.cycle()) + " done node=" +
                       nodes[static_cast<std::size_t>(inv.node)].name + " instance=" +
                       std::to_string(inv.instance) + " first_chunk=" +
                       std::to_string(inv.first_chunk));
            for (int dep : inv.dependents) {
                if (--invs[static_cast<std::size_t>(dep)].deps_unmet == 0) {
                    ready.push_back(dep);
                }
            }
            running_on.erase(it);
            sim_.note_external_progress();
        }
    }

    // ---- collect ----------------------------------------------------------
    last_outputs_.clear();
    for (std::size_t b = 0; b < graph.outputs.size(); ++b) {
        for (const auto& pn : nodes) {
            if (pn.output_binding == static_cast<int>(b)) {
                last_outputs_.push_back(sim_.memory().read_block(
                    arena.base + output_off[b], frames * pn.out_words));
            }
        }
    }

    RunReport rep;
    rep.soc = sim_.config().name;
    rep.dataflow = graph.name;
    rep.mode = to_string(mode);
    rep.frames = frames;
    rep.seed = seed;
    rep.total_cycles = sim_.cycle();
    rep.clock_mhz = sim_.config().clock_mhz;
    rep.frames_per_second = static_cast<double>(frames) * sim_.config().clock_mhz * 1e6 /
                            static_cast<double>(rep.total_cycles);
    rep.dram_read_words = sim_.memory().dram_read_words();
    rep.dram_write_words = sim_.memory().dram_write_words();
    rep.total_link_flits = sim_.mesh().total_link_flits();
    rep.max_queue_occupancy = sim_.mesh().max_queue_occupancy();
    rep.link_flits = sim_.mesh().link_flit_counts();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (int k = 0; k < nodes[i].instances; ++k) {
            AcceleratorTile* a = sim_.accel_at(nodes[i].tiles[static_cast<std::size_t>(k)]);
            NodeBusyRow row;
            row.node = nodes[i].name;
            row.instance = k;
            row.tile = nodes[i].tiles[static_cast<std::size_t>(k)];
            row.busy_cycles = a->busy_cycles();
            row.chunks = a->chunks_done();
            rep.node_busy.push_back(std::move(row));
        }
    }
    return rep;
}

RunReport run_experiment(const SocConfig& soc, const DataflowGraph& graph, Mode mode,
                         std::uint64_t frames, std::uint64_t seed, std::string* trace,
                         std::vector<std::vector<Word>>* outputs) {
    SocSim sim(soc);
    Runtime rt(sim);
    if (trace != nullptr) rt.set_trace(trace);
    ValidatedGraph plan = rt.validate(graph);
    RunReport rep = rt.run(plan, mode, frames, seed);
    rep.fingerprint = fingerprint_hex(soc.canonical() + "|" + graph.canonical() + "|" +
                                      to_string(mode) + "|" + std::to_string(frames) + "|" +
                                      std::to_string(seed));
    if (outputs != nullptr) *outputs = rt.last_outputs();
    return rep;
}

}  // namespace tilesim
