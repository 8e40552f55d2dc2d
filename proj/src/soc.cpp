// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#include "tilesim/soc.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tilesim {

namespace {

std::uint64_t default_alpha_for(KernelKind k) {
    switch (k) {
        case KernelKind::Median: return 4;
        case KernelKind::Equalize: return 2;
        default: return 1;
    }
}

std::string dirname_of(const std::string& path) {
    auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

}  // namespace

SocConfig SocConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open SoC file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return from_json_text(ss.str(), dirname_of(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

SocConfig SocConfig::from_json_text(const std::string& text, const std::string& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("SoC file is not valid JSON: ") + e.what());
    }
    SocConfig cfg;
    cfg.name = j.value("name", "soc");
    if (!j.contains("mesh")) throw ConfigError("SoC file missing \"mesh\"");
    cfg.mesh.cols = j["mesh"].value("cols", 0);
    cfg.mesh.rows = j["mesh"].value("rows", 0);
    if (j.contains("noc")) {
        const auto& n = j["noc"];
        cfg.noc.queue_depth = n.value("queue_depth", cfg.noc.queue_depth);
        cfg.noc.router_latency = n.value("router_latency", cfg.noc.router_latency);
        cfg.noc.flit_bits = n.value("flit_bits", cfg.noc.flit_bits);
        cfg.noc.max_packet_words = n.value("max_packet_words", cfg.noc.max_packet_words);
    }
    if (j.contains("dram")) {
        const auto& d = j["dram"];
        cfg.dram.latency = d.value("latency", cfg.dram.latency);
        cfg.dram.bandwidth = d.value("bandwidth", cfg.dram.bandwidth);
        cfg.dram.words = d.value("words", cfg.dram.words);
    }
    cfg.clock_mhz = j.value("clock_mhz", cfg.clock_mhz);
    cfg.watchdog_cycles = j.value("watchdog_cycles", cfg.watchdog_cycles);

    if (!j.contains("tiles") || !j["tiles"].is_array()) {
        throw ConfigError("SoC file missing \"tiles\" array");
    }
    for (const auto& t : j["tiles"]) {
        TileDescriptor d;
        if (!t.contains("coord") || !t["coord"].is_array() || t["coord"].size() != 2) {
            throw ConfigError("tile entry needs \"coord\": [x, y]");
        }
        d.coord = {t["coord"][0].get<int>(), t["coord"][1].get<int>()};
        d.kind = tile_kind_from_string(t.value("kind", std::string("auxiliary")));
        if (d.kind == TileKind::Accelerator) {
            d.name = t.value("name", "");
            d.kernel = t.value("kernel", "");
            d.model = t.value("model", "");
            if (!d.model.empty() && d.model.front() != '/') {
                d.model = base_dir + "/" + d.model;
            }
            d.dense_layer = t.value("layer", 0);
            d.alpha = t.value("alpha", std::uint64_t{0});
            d.reuse_factor = t.value("reuse_factor", 16u);
            d.pipeline_depth = t.value("pipeline_depth", 8u);
            d.in_capacity = t.value("in_capacity", 0u);
            d.out_capacity = t.value("out_capacity", 0u);
        }
        cfg.tiles.push_back(std::move(d));
    }
    cfg.check();
    return cfg;
}

void SocConfig::check() const {
    if (mesh.cols < 1 || mesh.rows < 1) throw ConfigError("mesh dimensions must be positive");
    std::set<std::pair<int, int>> seen;
    std::set<std::string> names;
    int memories = 0, processors = 0;
    for (const auto& t : tiles) {
        if (!mesh.contains(t.coord)) {
            throw ConfigError("tile " + to_string(t.coord) + " is outside the mesh");
        }
        if (!seen.insert({t.coord.x, t.coord.y}).second) {
            throw ConfigError("duplicate tile coordinate " + to_string(t.coord));
        }
        switch (t.kind) {
            case TileKind::Memory: memories++; break;
            case TileKind::Processor: processors++; break;
            case TileKind::Accelerator: {
                if (t.name.empty()) {
                    throw ConfigError("accelerator at " + to_string(t.coord) + " needs a name");
                }
                if (!names.insert(t.name).second) {
                    throw ConfigError("duplicate device name: " + t.name);
                }
                kernel_kind_from_string(t.kernel);  // validates
                break;
            }
            default: break;
        }
    }
    if (memories != 1) throw ConfigError("the floorplan needs exactly one memory tile");
    if (processors < 1) throw ConfigError("the floorplan needs at least one processor tile");
}

std::string SocConfig::canonical() const {
    nlohmann::json j;
    j["name"] = name;
    j["mesh"] = {{"cols", mesh.cols}, {"rows", mesh.rows}};
    j["noc"] = {{"queue_depth", noc.queue_depth},
                {"router_latency", noc.router_latency},
                {"flit_bits", noc.flit_bits},
                {"max_packet_words", noc.max_packet_words}};
    j["dram"] = {{"latency", dram.latency}, {"bandwidth", dram.bandwidth}, {"words", dram.words}};
    j["clock_mhz"] = clock_mhz;
    j["watchdog_cycles"] = watchdog_cycles;
    nlohmann::json tl = nlohmann::json::array();
    for (const auto& t : tiles) {
        nlohmann::json e;
        e["coord"] = {t.coord.x, t.coord.y};
        e["kind"] = to_string(t.kind);
        if (t.kind == TileKind::Accelerator) {
            e["name"] = t.name;
            e["kernel"] = t.kernel;
            e["model"] = t.model;
            e["layer"] = t.dense_layer;
            e["alpha"] = t.alpha;
            e["reuse_factor"] = t.reuse_factor;
            e["pipeline_depth"] = t.pipeline_depth;
            e["in_capacity"] = t.in_capacity;
            e["out_capacity"] = t.out_capacity;
        }
        tl.push_back(e);
    }
    j["tiles"] = tl;
    return j.dump();
}

SocSim::SocSim(SocConfig cfg) : cfg_(std::move(cfg)), mesh_(cfg_.mesh, cfg_.noc) {
    cfg_.check();
    slots_.assign(static_cast<std::size_t>(cfg_.mesh.cols) * cfg_.mesh.rows, Slot{});

    Coord mem_coord{};
    Coord irq_dst{};
    bool have_proc = false;
    for (const auto& t : cfg_.tiles) {
        if (t.kind == TileKind::Memory) mem_coord = t.coord;
        if (t.kind == TileKind::Processor && !have_proc) {
            irq_dst = t.coord;
            have_proc = true;
        }
    }

    std::map<std::string, std::shared_ptr<const MlpModel>> model_cache;
    for (const auto& t : cfg_.tiles) {
        Slot slot;
        slot.kind = t.kind;
        switch (t.kind) {
            case TileKind::Memory:
                memory_ = std::make_unique<MemoryTile>(t.coord, cfg_.dram, &mesh_);
                slot.index = 0;
                break;
            case TileKind::Processor:
                slot.index = static_cast<int>(procs_.size());
                procs_.push_back(std::make_unique<ProcessorTile>(t.coord, &mesh_));
                break;
            case TileKind::Accelerator: {
                const KernelKind kind = kernel_kind_from_string(t.kernel);
                std::shared_ptr<const MlpModel> model;
                if (!t.model.empty()) {
                    auto it = model_cache.find(t.model);
                    if (it == model_cache.end()) {
                        it = model_cache
                                 .emplace(t.model,
                                          std::make_shared<MlpModel>(load_model(t.model)))
                                 .first;
                    }
                    model = it->second;
                }
                Kernel kernel(kind, model, t.dense_layer,
                              t.alpha ? t.alpha : default_alpha_for(kind), t.reuse_factor,
                              t.pipeline_depth);
                slot.index = static_cast<int>(accels_.size());
                accels_.push_back(std::make_unique<AcceleratorTile>(t, mem_coord, irq_dst,
                                                                    std::move(kernel), &mesh_));
                break;
            }
            case TileKind::Auxiliary:
                break;
        }
        slots_[static_cast<std::size_t>(t.coord.y) * cfg_.mesh.cols + t.coord.x] = slot;
    }
}

AcceleratorTile* SocSim::accel_at(Coord c) {
    if (!cfg_.mesh.contains(c)) return nullptr;
    const Slot& s = slots_[static_cast<std::size_t>(c.y) * cfg_.mesh.cols + c.x];
    return s.kind == TileKind::Accelerator ? accels_[static_cast<std::size_t>(s.index)].get()
                                           : nullptr;
}

AcceleratorTile* SocSim::accel_named(const std::string& name) {
    for (auto& a : accels_) {
        if (a->name() == name) return a.get();
    }
    return nullptr;
}

std::vector<AcceleratorTile*> SocSim::accelerators() {
    std::vector<AcceleratorTile*> out;
    out.reserve(accels_.size());
    for (auto& a : accels_) out.push_back(a.get());
    return out;
}

void SocSim::step() {
    cycle_++;
    bool progress = false;

    auto deliveries = mesh_.step(cycle_);
    if (!deliveries.empty()) progress = true;
    for (auto& d : deliveries) {
        const Slot& s = slots_[static_cast<std::size_t>(d.at.y) * cfg_.mesh.cols + d.at.x];
        switch (s.kind) {
            case TileKind::Memory:
                memory_->on_packet(std::move(d.packet), cycle_);
                break;
            case TileKind::Processor:
                procs_[static_cast<std::size_t>(s.index)]->on_packet(std::move(d.packet),
                                                                     cycle_);
                break;
            case TileKind::Accelerator:
                accels_[static_cast<std::size_t>(s.index)]->on_packet(std::move(d.packet),
                                                                      cycle_);
                break;
            case TileKind::Auxiliary:
                break;  // sink
        }
    }

    progress |= memory_->step(cycle_);
    for (auto& a : accels_) progress |= a->step(cycle_);
    for (auto& p : procs_) progress |= p->step(cycle_);

    if (progress) {
        last_progress_ = cycle_;
    } else if (cycle_ - last_progress_ > cfg_.watchdog_cycles) {
        throw DeadlockError(deadlock_report());
    }
}

std::string SocSim::deadlock_report() const {
    std::ostringstream os;
    os << "watchdog: no progress for " << cfg_.watchdog_cycles << " cycles (cycle " << cycle_
       << ")";
    for (const auto& a : accels_) os << "\n  " << a->debug_state();
    os << "\n  flits in flight: " << mesh_.flits_in_flight();
    return os.str();
}

std::unique_ptr<SocSim> build_soc(const SocConfig& cfg) { return std::make_unique<SocSim>(cfg); }

}  // namespace tilesim
