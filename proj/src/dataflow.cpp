// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#include "tilesim/dataflow.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tilesim {

DataflowGraph DataflowGraph::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dataflow file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

DataflowGraph DataflowGraph::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("dataflow file is not valid JSON: ") + e.what());
    }
    DataflowGraph g;
    g.name = j.value("name", "dataflow");
    for (const auto& n : j.value("nodes", nlohmann::json::array())) {
        DataflowNode node;
        node.name = n.value("name", "");
        node.kernel = n.value("kernel", "");
        node.instances = n.value("instances", 1);
        if (n.contains("params") && n["params"].is_object()) {
            for (auto it = n["params"].begin(); it != n["params"].end(); ++it) {
                if (it.value().is_number()) {
                    node.params[it.key()] = it.value().get<std::uint64_t>();
                }
                // unknown non-numeric params are carried by the file, ignored here
            }
        }
        g.nodes.push_back(std::move(node));
    }
    for (const auto& e : j.value("edges", nlohmann::json::array())) {
        DataflowEdge edge;
        edge.src = e.value("src", "");
        edge.dst = e.value("dst", "");
        const std::string mode = e.value("mode", "dma");
        if (mode == "dma") {
            edge.mode = EdgeMode::Dma;
        } else if (mode == "p2p") {
            edge.mode = EdgeMode::P2p;
        } else {
            throw ConfigError("edge mode must be \"dma\" or \"p2p\", got: " + mode);
        }
        edge.dst_segment = e.value("segment", -1);
        g.edges.push_back(std::move(edge));
    }
    auto parse_io = [](const nlohmann::json& arr) {
        std::vector<IoBinding> out;
        for (const auto& b : arr) {
            IoBinding io;
            io.node = b.value("node", "");
            io.segment = b.value("segment", -1);
            out.push_back(io);
        }
        return out;
    };
    g.inputs = parse_io(j.value("inputs", nlohmann::json::array()));
    g.outputs = parse_io(j.value("outputs", nlohmann::json::array()));
    return g;
}

std::string DataflowGraph::canonical() const {
    nlohmann::json j;
    j["name"] = name;
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : this->nodes) {
        nlohmann::json e;
        e["name"] = n.name;
        e["kernel"] = n.kernel;
        e["instances"] = n.instances;
        e["params"] = n.params;
        nodes.push_back(e);
    }
    j["nodes"] = nodes;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& ed : this->edges) {
        edges.push_back({{"src", ed.src},
                         {"dst", ed.dst},
                         {"mode", ed.mode == EdgeMode::P2p ? "p2p" : "dma"},
                         {"segment", ed.dst_segment}});
    }
    j["edges"] = edges;
    auto dump_io = [](const std::vector<IoBinding>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& b : v) arr.push_back({{"node", b.node}, {"segment", b.segment}});
        return arr;
    };
    j["inputs"] = dump_io(inputs);
    j["outputs"] = dump_io(outputs);
    return j.dump();
}

std::string ValidationError::join(const std::vector<ValidationIssue>& issues) {
    std::ostringstream os;
    os << "dataflow validation failed:";
    for (const auto& i : issues) os << "\n  [" << i.where << "] " << i.message;
    return os.str();
}

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

const DeviceInfo* DeviceRegistry::find(const std::string& name) const {
    for (const auto& d : devices_) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

namespace {

std::string instance_device_name(const std::string& base, int instance) {
    return instance == 0 ? base : base + "." + std::to_string(instance);
}

}  // namespace

std::vector<ValidationIssue> validate_dataflow(const DataflowGraph& graph,
                                               const DeviceRegistry& registry,
                                               ValidatedGraph* out) {
    std::vector<ValidationIssue> issues;
    auto issue = [&issues](const std::string& where, const std::string& msg) {
        issues.push_back({where, msg});
    };

    std::map<std::string, int> node_index;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        const auto& n = graph.nodes[i];
        if (n.name.empty()) {
            issue("node#" + std::to_string(i), "node has no name");
            continue;
        }
        if (!node_index.emplace(n.name, static_cast<int>(i)).second) {
            issue(n.name, "duplicate node name");
        }
        if (n.instances < 1) issue(n.name, "instances must be >= 1");
    }
    if (graph.nodes.empty()) issue("graph", "dataflow has no nodes");

    // Resolve devices per instance.
    std::vector<PlanNode> nodes(graph.nodes.size());
    std::map<std::string, std::string> device_user;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        const auto& n = graph.nodes[i];
        PlanNode& pn = nodes[i];
        pn.name = n.name;
        pn.instances = std::max(1, n.instances);
        for (int k = 0; k < pn.instances; ++k) {
            const std::string dev_name = instance_device_name(n.name, k);
            const DeviceInfo* dev = registry.find(dev_name);
            if (dev == nullptr) {
                issue(n.name, "no device named \"" + dev_name + "\" in the registry");
                continue;
            }
            auto [it, fresh] = device_user.emplace(dev_name, n.name);
            if (!fresh) {
                issue(n.name, "device \"" + dev_name + "\" already used by node " + it->second);
            }
            if (!n.kernel.empty() && n.kernel != to_string(dev->kind)) {
                issue(n.name, "kernel \"" + n.kernel + "\" does not match device kernel \"" +
                                  to_string(dev->kind) + "\"");
            }
            if (k > 0 && pn.kernel != nullptr && dev->kind != pn.kernel->kind()) {
                issue(n.name, "instances bind devices with different kernels");
            }
            pn.tiles.push_back(dev->coord);
            if (pn.kernel == nullptr) pn.kernel = dev->kernel;
        }
    }
    if (!issues.empty()) return issues;

    // Edge endpoints.
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const auto& edge = graph.edges[e];
        const std::string where = edge.src + "->" + edge.dst;
        if (!node_index.count(edge.src)) issue(where, "unknown source node");
        if (!node_index.count(edge.dst)) issue(where, "unknown destination node");
        if (edge.src == edge.dst) issue(where, "self-loop forms a cycle");
    }
    for (const auto& io : graph.inputs) {
        if (!node_index.count(io.node)) issue("input:" + io.node, "unknown node");
    }
    for (const auto& io : graph.outputs) {
        if (!node_index.count(io.node)) issue("output:" + io.node, "unknown node");
    }
    if (!issues.empty()) return issues;

    // Topological order (Kahn).
    std::vector<int> indeg(nodes.size(), 0);
    for (const auto& e : graph.edges) indeg[node_index[e.dst]]++;
    std::deque<int> ready;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (indeg[i] == 0) ready.push_back(static_cast<int>(i));
    }
    std::vector<int> topo;
    while (!ready.empty()) {
        int i = ready.front();
        ready.pop_front();
        topo.push_back(i);
        for (const auto& e : graph.edges) {
            if (node_index[e.src] == i && --indeg[node_index[e.dst]] == 0) {
                ready.push_back(node_index[e.dst]);
            }
        }
    }
    if (topo.size() != nodes.size()) {
        issue("graph", "dataflow contains a cycle");
        return issues;
    }

    // Feeder assignment: app inputs first, then in-edges, both in file order.
    struct RawFeeder {
        PlanFeeder feeder;
        int want_segment;
        std::string where;
    };
    std::vector<std::vector<RawFeeder>> feeders(nodes.size());
    for (std::size_t b = 0; b < graph.inputs.size(); ++b) {
        const auto& io = graph.inputs[b];
        PlanFeeder f;
        f.from_edge = false;
        f.input_index = static_cast<int>(b);
        feeders[node_index[io.node]].push_back({f, io.segment, "input:" + io.node});
    }
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const auto& edge = graph.edges[e];
        PlanFeeder f;
        f.from_edge = true;
        f.edge_index = static_cast<int>(e);
        f.producer = node_index[edge.src];
        feeders[node_index[edge.dst]].push_back(
            {f, edge.dst_segment, edge.src + "->" + edge.dst});
        nodes[node_index[edge.src]].out_edges.push_back(static_cast<int>(e));
    }
    for (std::size_t b = 0; b < graph.outputs.size(); ++b) {
        PlanNode& pn = nodes[node_index[graph.outputs[b].node]];
        if (pn.output_binding != -1) {
            issue("output:" + graph.outputs[b].node, "node bound as output twice");
        }
        pn.output_binding = static_cast<int>(b);
    }

    // Per-node shape resolution, in topological order so producers are known.
    for (int ni : topo) {
        const auto& gnode = graph.nodes[ni];
        PlanNode& pn = nodes[ni];
        const std::string& where = pn.name;

        pn.tuning = KernelTuning{};
        auto param = [&gnode](const char* key, std::uint64_t dflt) {
            auto it = gnode.params.find(key);
            return it == gnode.params.end() ? dflt : it->second;
        };
        pn.tuning.alpha = param("alpha", 0);
        pn.tuning.reuse_factor = param("reuse_factor", 0);
        pn.tuning.out_words = param("out_words", 0);

        const bool generic =
            pn.kernel->kind() == KernelKind::Copy || pn.kernel->kind() == KernelKind::Blend;

        // Place feeders into segment slots.
        const auto& raw = feeders[ni];
        if (raw.empty()) {
            issue(where, "node has no inputs (needs an app input or an incoming edge)");
            continue;
        }
        if (raw.size() > kMaxSegments) {
            int p2p_in = 0;
            for (const auto& rf : raw) {
                if (rf.feeder.from_edge &&
                    graph.edges[static_cast<std::size_t>(rf.feeder.edge_index)].mode ==
                        EdgeMode::P2p) {
                    p2p_in++;
                }
            }
            if (p2p_in > 4) {
                issue(where,
                      "p2p fan-in limit is 4 sources, got " + std::to_string(p2p_in));
            } else {
                issue(where, "more than 4 input segments");
            }
            continue;
        }
        std::vector<int> order(raw.size(), -1);  // segment -> raw index
        std::vector<bool> placed(raw.size(), false);
        bool seg_ok = true;
        for (std::size_t r = 0; r < raw.size(); ++r) {
            const int want = raw[r].want_segment;
            if (want < 0) continue;
            if (want >= static_cast<int>(raw.size()) || order[want] != -1) {
                issue(raw[r].where, "segment index invalid or already taken");
                seg_ok = false;
                break;
            }
            order[want] = static_cast<int>(r);
            placed[r] = true;
        }
        if (!seg_ok) continue;
        std::size_t next = 0;
        for (std::size_t r = 0; r < raw.size(); ++r) {
            if (placed[r]) continue;
            while (next < order.size() && order[next] != -1) next++;
            order[next] = static_cast<int>(r);
        }

        // Segment widths.
        std::vector<std::uint32_t> widths(raw.size(), 0);
        if (generic) {
            for (std::size_t s = 0; s < order.size(); ++s) {
                const RawFeeder& rf = raw[order[s]];
                if (rf.feeder.from_edge) {
                    widths[s] = nodes[rf.feeder.producer].out_words;
                } else {
                    widths[s] = static_cast<std::uint32_t>(
                        param("words", static_cast<std::uint64_t>(kImagePixels)));
                }
                pn.tuning.seg_words[s] = widths[s];
            }
        } else {
            const auto want = pn.kernel->input_segments(pn.tuning);
            if (want.size() != raw.size()) {
                issue(where, "kernel expects " + std::to_string(want.size()) +
                                 " input segment(s), got " + std::to_string(raw.size()));
                continue;
            }
            for (std::size_t s = 0; s < want.size(); ++s) widths[s] = want[s];
            for (std::size_t s = 0; s < order.size(); ++s) {
                const RawFeeder& rf = raw[order[s]];
                if (rf.feeder.from_edge &&
                    nodes[rf.feeder.producer].out_words != widths[s]) {
                    issue(rf.where,
                          "producer emits " +
                              std::to_string(nodes[rf.feeder.producer].out_words) +
                              " words but segment " + std::to_string(s) + " needs " +
                              std::to_string(widths[s]));
                }
            }
        }

        pn.seg_words = widths;
        pn.feeders.clear();
        for (std::size_t s = 0; s < order.size(); ++s) pn.feeders.push_back(raw[order[s]].feeder);
        pn.out_words = pn.kernel->output_words(pn.tuning);
        std::uint32_t chunk = 0;
        for (auto w : widths) chunk += w;
        pn.compute_cycles_per_chunk = pn.kernel->compute_cycles(pn.tuning, chunk);

        for (Coord tile_coord : pn.tiles) {
            const DeviceInfo* dev = nullptr;
            for (const auto& d : registry.devices()) {
                if (d.coord == tile_coord) dev = &d;
            }
            if (dev && chunk > dev->in_capacity) {
                issue(where, "chunk of " + std::to_string(chunk) +
                                 " words exceeds the in_buf capacity of device " + dev->name);
            }
            if (dev && pn.out_words > dev->out_capacity) {
                issue(where, "output of " + std::to_string(pn.out_words) +
                                 " words exceeds the out_buf capacity of device " + dev->name);
            }
        }

        // Every node's output must go somewhere.
        if (pn.out_edges.empty() && pn.output_binding == -1) {
            issue(where, "output is neither consumed by an edge nor bound as an app output");
        }
    }
    if (!issues.empty()) return issues;

    // p2p configuration per node.
    for (int ni : topo) {
        PlanNode& pn = nodes[ni];
        const std::string& where = pn.name;
        P2pConfig cfg;

        // Load side.
        std::vector<int> p2p_segments;
        for (std::size_t s = 0; s < pn.feeders.size(); ++s) {
            const PlanFeeder& f = pn.feeders[s];
            if (f.from_edge && graph.edges[f.edge_index].mode == EdgeMode::P2p) {
                p2p_segments.push_back(static_cast<int>(s));
            }
        }
        if (!p2p_segments.empty()) {
            if (pn.instances > 1) {
                issue(where, "a replicated node cannot itself consume via p2p");
                continue;
            }
            bool replicated_producer = false;
            for (int s : p2p_segments) {
                if (nodes[pn.feeders[s].producer].instances > 1) replicated_producer = true;
            }
            if (replicated_producer) {
                if (p2p_segments.size() != 1 || pn.feeders.size() != 1) {
                    issue(where,
                          "a p2p edge from a replicated producer must be the node's only input");
                    continue;
                }
                const PlanNode& prod = nodes[pn.feeders[0].producer];
                if (prod.instances > 4) {
                    issue(where, "p2p fan-in limit is 4 sources, got " +
                                     std::to_string(prod.instances) + " instances");
                    continue;
                }
                cfg.load_enabled = true;
                cfg.round_robin = true;
                cfg.n_sources = static_cast<std::uint8_t>(prod.instances);
                for (int k = 0; k < prod.instances; ++k) cfg.sources[k] = prod.tiles[k];
                pn.round_robin_load = true;
            } else {
                if (p2p_segments.size() > 4) {
                    issue(where, "p2p fan-in limit is 4 sources, got " +
                                     std::to_string(p2p_segments.size()));
                    continue;
                }
                cfg.load_enabled = true;
                cfg.n_sources = static_cast<std::uint8_t>(p2p_segments.size());
                int k = 0;
                for (int s : p2p_segments) {
                    cfg.sources[k++] = nodes[pn.feeders[s].producer].tiles[0];
                }
            }
        }

        // Store side. A store is either on-demand p2p or DMA, never both:
        // the configuration register has a single store-enable, and a p2p
        // store that also fed runtime-ordered DMA consumers could wait on a
        // consumer whose launch waits on this very invocation.
        int p2p_consumers = 0;
        int dma_consumers = 0;
        for (int e : pn.out_edges) {
            if (graph.edges[static_cast<std::size_t>(e)].mode == EdgeMode::P2p) {
                p2p_consumers++;
            } else {
                dma_consumers++;
            }
        }
        if (p2p_consumers > 0 && (dma_consumers > 0 || pn.output_binding != -1)) {
            issue(where, "a node cannot mix p2p consumers with DMA consumers or an app output");
            continue;
        }
        if (p2p_consumers > 0) {
            if (pn.instances > 1) {
                // Each instance stages its own frames; every consumer must pull
                // round-robin, which the load side has already enforced.
                if (p2p_consumers > 1) {
                    issue(where, "a replicated producer supports a single p2p consumer");
                    continue;
                }
            }
            if (p2p_consumers > 15) {
                issue(where, "too many p2p consumers");
                continue;
            }
            cfg.store_enabled = true;
            cfg.n_consumers = static_cast<std::uint8_t>(p2p_consumers);
        }
        pn.p2p = cfg;
    }
    if (!issues.empty()) return issues;

    if (out != nullptr) {
        out->graph = graph;
        out->nodes = std::move(nodes);
        out->topo = std::move(topo);
    }
    return issues;
}

}  // namespace tilesim
