// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_DATAFLOW_HPP
#define TILESIM_DATAFLOW_HPP

#include <map>
#include <string>
#include <vector>

#include "tilesim/kernels.hpp"
#include "tilesim/registers.hpp"
#include "tilesim/types.hpp"

namespace tilesim {

enum class EdgeMode { Dma, P2p };

struct DataflowNode {
    std::string name;  // device name; instance k > 0 binds device "<name>.k"
    std::string kernel;  // optional, checked against the device
    int instances = 1;
    std::map<std::string, std::uint64_t> params;
};

struct DataflowEdge {
    std::string src;
    std::string dst;
    EdgeMode mode = EdgeMode::Dma;
    int dst_segment = -1;  // -1: assign by position
};

struct IoBinding {
    std::string node;
    int segment = -1;
};

// The application's view: named invocations and DMA-or-p2p edges. Tile
// coordinates never appear here; the registry supplies them.
struct DataflowGraph {
    std::string name = "dataflow";
    std::vector<DataflowNode> nodes;
    std::vector<DataflowEdge> edges;
    std::vector<IoBinding> inputs;
    std::vector<IoBinding> outputs;

    static DataflowGraph from_file(const std::string& path);
    static DataflowGraph from_json_text(const std::string& text);
    std::string canonical() const;
};

struct ValidationIssue {
    std::string where;    // node or edge identity
    std::string message;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues);
    const std::vector<ValidationIssue>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<ValidationIssue>& issues);
    std::vector<ValidationIssue> issues_;
};

struct DeviceInfo {
    std::string name;
    Coord coord{};
    KernelKind kind = KernelKind::Copy;
    const Kernel* kernel = nullptr;
    std::uint32_t in_capacity = 0;
    std::uint32_t out_capacity = 0;
};

class DeviceRegistry {
public:
    void add(DeviceInfo info) { devices_.push_back(std::move(info)); }
    const DeviceInfo* find(const std::string& name) const;
    const std::vector<DeviceInfo>& devices() const { return devices_; }

private:
    std::vector<DeviceInfo> devices_;
};

// One segment's feeder after resolution.
struct PlanFeeder {
    bool from_edge = false;
    int edge_index = -1;   // graph.edges index
    int producer = -1;     // node index
    int input_index = -1;  // graph.inputs index
};

struct PlanNode {
    std::string name;
    int instances = 1;
    std::vector<Coord> tiles;  // one per instance
    const Kernel* kernel = nullptr;
    KernelTuning tuning{};
    std::vector<std::uint32_t> seg_words;
    std::uint32_t out_words = 0;
    std::uint64_t compute_cycles_per_chunk = 0;
    std::vector<PlanFeeder> feeders;  // one per segment
    std::vector<int> out_edges;       // graph.edges indices
    int output_binding = -1;          // graph.outputs index or -1
    bool round_robin_load = false;    // consumes a replicated producer
    P2pConfig p2p{};                  // computed p2p register contents (p2p runs)
};

struct ValidatedGraph {
    DataflowGraph graph;
    std::vector<PlanNode> nodes;
    std::vector<int> topo;  // node indices, topological order
};

// Full normalization: resolves devices, assigns segments, checks shapes,
// acyclicity and the p2p constraints, and computes each node's P2pConfig.
// Returns the issue list; `out` is filled only when it is empty.
std::vector<ValidationIssue> validate_dataflow(const DataflowGraph& graph,
                                               const DeviceRegistry& registry,
                                               ValidatedGraph* out);

}  // namespace tilesim

#endif
