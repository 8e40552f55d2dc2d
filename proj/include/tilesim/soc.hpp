// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_SOC_HPP
#define TILESIM_SOC_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tilesim/tiles.hpp"

namespace tilesim {

// The SoC floorplan plus fabric/memory/clock parameters; what the GUI-less
// equivalent of a floorplanning step produces.
struct SocConfig {
    std::string name = "soc";
    MeshDims mesh{};
    NocParams noc{};
    DramParams dram{};
    double clock_mhz = 78.0;
    Cycle watchdog_cycles = 10'000'000;
    std::vector<TileDescriptor> tiles;

    static SocConfig from_file(const std::string& path);
    // base_dir resolves relative model paths.
    static SocConfig from_json_text(const std::string& text, const std::string& base_dir);

    void check() const;          // floorplan invariants
    std::string canonical() const;  // stable serialization, used for fingerprints
};

// One simulated SoC instance: the mesh plus all tile models, advanced one
// cycle at a time. Watchdog: if nothing in the whole system makes progress
// for watchdog_cycles, step() throws DeadlockError with a per-tile report.
class SocSim {
public:
    explicit SocSim(SocConfig cfg);

    void step();
    Cycle cycle() const { return cycle_; }

    Mesh& mesh() { return mesh_; }
    const Mesh& mesh() const { return mesh_; }
    MemoryTile& memory() { return *memory_; }
    const MemoryTile& memory() const { return *memory_; }
    ProcessorTile& proc() { return *procs_.front(); }  // the runtime's seat
    Coord memory_coord() const { return memory_->coord(); }

    AcceleratorTile* accel_at(Coord c);
    AcceleratorTile* accel_named(const std::string& name);
    std::vector<AcceleratorTile*> accelerators();

    const SocConfig& config() const { return cfg_; }

    // External actors (the runtime oracle) report activity here so the
    // watchdog only fires when the whole system is stuck.
    void note_external_progress() { last_progress_ = cycle_; }

    std::string deadlock_report() const;

private:
    struct Slot {
        TileKind kind = TileKind::Auxiliary;
        int index = -1;
    };

    SocConfig cfg_;
    Mesh mesh_;
    std::unique_ptr<MemoryTile> memory_;
    std::vector<std::unique_ptr<ProcessorTile>> procs_;
    std::vector<std::unique_ptr<AcceleratorTile>> accels_;
    std::vector<Slot> slots_;
    Cycle cycle_ = 0;
    Cycle last_progress_ = 0;
};

std::unique_ptr<SocSim> build_soc(const SocConfig& cfg);

}  // namespace tilesim

#endif
