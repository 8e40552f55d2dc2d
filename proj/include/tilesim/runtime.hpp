// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_RUNTIME_HPP
#define TILESIM_RUNTIME_HPP

#include <optional>
#include <string>
#include <vector>

#include "tilesim/dataflow.hpp"
#include "tilesim/report.hpp"
#include "tilesim/soc.hpp"

namespace tilesim {

enum class Mode { Serial, Pipe, PipeP2p };

Mode mode_from_string(const std::string& s);
const char* to_string(Mode m);

struct BufferHandle {
    std::uint64_t base = 0;
    std::uint64_t words = 0;
};

// The software layer: buffer allocation, device registry (probed over the
// NoC at boot), dataflow validation and the three execution modes. Executes
// host-side as a zero-latency oracle; everything it does to the hardware
// goes through configuration packets from the processor tile.
class Runtime {
public:
    explicit Runtime(SocSim& sim);

    const DeviceRegistry& registry() const { return registry_; }

    // Contiguous bump allocation in simulated DRAM, zero-initialized.
    BufferHandle alloc(std::uint64_t words);

    std::vector<ValidationIssue> check(const DataflowGraph& graph, ValidatedGraph* out) const;
    ValidatedGraph validate(const DataflowGraph& graph) const;  // throws ValidationError

    // Runs `frames` frames through the graph. Inputs are filled from `seed`.
    // serial: whole-dataset invocations, one node after another.
    // pipe: per-frame invocations, frame dependencies enforced here, data
    //       through DRAM double buffers.
    // p2p: P2P edges synchronized by the hardware protocol; only DMA edges
    //       (and their endpoints) stay under per-frame runtime control.
    RunReport run(const ValidatedGraph& plan, Mode mode, std::uint64_t frames,
                  std::uint64_t seed);

    // DRAM contents of each output binding after the last run, and the
    // inputs that were generated for it (frame-major), for oracles.
    const std::vector<std::vector<Word>>& last_outputs() const { return last_outputs_; }
    const std::vector<std::vector<Word>>& last_inputs() const { return last_inputs_; }

    // Per-run event log (one line per launch/interrupt) when enabled.
    void set_trace(std::string* sink) { trace_ = sink; }

private:
    void probe_registry();
    void trace_line(const std::string& s);

    SocSim& sim_;
    DeviceRegistry registry_;
    std::uint64_t bump_ = 0;
    std::vector<std::vector<Word>> last_outputs_;
    std::vector<std::vector<Word>> last_inputs_;
    std::string* trace_ = nullptr;
};

// Builds the SoC, validates, runs one mode, and assembles the full report
// (including the config fingerprint). Throws ValidationError / DeadlockError.
RunReport run_experiment(const SocConfig& soc, const DataflowGraph& graph, Mode mode,
                         std::uint64_t frames, std::uint64_t seed,
                         std::string* trace = nullptr,
                         std::vector<std::vector<Word>>* outputs = nullptr);

}  // namespace tilesim

#endif
