// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment driver: builds the SoC from a floorplan file, loads a dataflow,
// runs it in one mode (or sweeps all three with --compare) and emits CSV
// metrics plus a plain-text run manifest.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tilesim/runtime.hpp"

using namespace tilesim;

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path);
    out << content;
}

void emit(const std::vector<RunReport>& reports, const std::string& out_path) {
    const std::string csv = reports_to_csv(reports);
    if (out_path.empty() || out_path == "-") {
        std::cout << csv;
        return;
    }
    write_file(out_path, csv);
    std::string links, nodes, manifest;
    for (const auto& r : reports) {
        links += r.links_csv();
        nodes += r.nodes_csv();
        manifest += r.manifest() + "\n";
    }
    write_file(out_path + ".links.csv", links);
    write_file(out_path + ".nodes.csv", nodes);
    write_file(out_path + ".manifest.txt", manifest);
}

void print_compare_tables(const std::vector<RunReport>& rs) {
    std::printf("\n%-8s %14s %14s %16s %14s\n", "mode", "cycles", "frames/s", "dram words",
                "link flits");
    for (const auto& r : rs) {
        std::printf("%-8s %14llu %14.1f %16llu %14llu\n", r.mode.c_str(),
                    static_cast<unsigned long long>(r.total_cycles), r.frames_per_second,
                    static_cast<unsigned long long>(r.dram_total_words()),
                    static_cast<unsigned long long>(r.total_link_flits));
    }
    const RunReport *serial = nullptr, *pipe = nullptr, *p2p = nullptr;
    for (const auto& r : rs) {
        if (r.mode == "serial") serial = &r;
        if (r.mode == "pipe") pipe = &r;
        if (r.mode == "p2p") p2p = &r;
    }
    std::printf("\n");
    if (pipe && serial) {
        std::printf("throughput pipe/serial:   %.3fx\n",
                    pipe->frames_per_second / serial->frames_per_second);
    }
    if (p2p && serial) {
        std::printf("throughput p2p/serial:    %.3fx\n",
                    p2p->frames_per_second / serial->frames_per_second);
    }
    if (pipe && p2p) {
        std::printf("relative DRAM accesses (pipe vs p2p): %.3fx fewer with p2p\n",
                    static_cast<double>(pipe->dram_total_words()) /
                        static_cast<double>(p2p->dram_total_words()));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tilesim: cycle-level tile-based SoC simulator"};
    std::string soc_path, flow_path, mode_str = "pipe", out_path, trace_path;
    std::uint64_t frames = 64, seed = 1;
    bool compare = false, check_only = false;

    app.add_option("--soc", soc_path, "SoC floorplan JSON file")->required();
    app.add_option("--dataflow", flow_path, "dataflow JSON file")->required();
    app.add_option("--mode", mode_str, "serial | pipe | p2p (default pipe)");
    app.add_option("--frames", frames, "frames to process (default 64)");
    app.add_option("--seed", seed, "input-generation seed (default 1)");
    app.add_option("--out", out_path, "CSV output path ('-' or empty: stdout)");
    app.add_option("--trace", trace_path, "write a per-event trace to this file");
    app.add_flag("--compare", compare, "run serial, pipe and p2p and print both tables");
    app.add_flag("--check", check_only, "validate the dataflow and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        SocConfig soc = SocConfig::from_file(soc_path);
        DataflowGraph graph = DataflowGraph::from_file(flow_path);

        if (check_only) {
            SocSim sim(soc);
            Runtime rt(sim);
            ValidatedGraph plan;
            auto issues = rt.check(graph, &plan);
            if (issues.empty()) {
                std::cout << "ok: " << graph.name << " is valid on " << soc.name << "\n";
                return 0;
            }
            for (const auto& i : issues) {
                std::cerr << "error: [" << i.where << "] " << i.message << "\n";
            }
            return 2;
        }

        std::string trace;
        std::string* trace_ptr = trace_path.empty() ? nullptr : &trace;
        std::vector<RunReport> reports;
        if (compare) {
            for (Mode m : {Mode::Serial, Mode::Pipe, Mode::PipeP2p}) {
                reports.push_back(run_experiment(soc, graph, m, frames, seed, trace_ptr));
            }
        } else {
            reports.push_back(
                run_experiment(soc, graph, mode_from_string(mode_str), frames, seed, trace_ptr));
        }
        emit(reports, out_path);
        if (!trace_path.empty()) write_file(trace_path, trace);
        if (compare) {
            print_compare_tables(reports);
        } else if (!out_path.empty() && out_path != "-") {
            std::cout << reports[0].manifest();
        }
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DeadlockError& e) {
        std::cerr << "deadlock: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
