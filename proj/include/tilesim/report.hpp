// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_REPORT_HPP
#define TILESIM_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tilesim/noc.hpp"

namespace tilesim {

struct NodeBusyRow {
    std::string node;
    int instance = 0;
    Coord tile{};
    std::uint64_t busy_cycles = 0;
    std::uint64_t chunks = 0;
};

// Metrics of one experiment run. One CSV row per run plus two side tables
// (per-link flits, per-node busy cycles) and a plain-text manifest.
struct RunReport {
    std::string soc;
    std::string dataflow;
    std::string mode;
    std::uint64_t frames = 0;
    std::uint64_t seed = 0;
    std::uint64_t total_cycles = 0;
    double clock_mhz = 0.0;
    double frames_per_second = 0.0;
    std::uint64_t dram_read_words = 0;
    std::uint64_t dram_write_words = 0;
    std::uint64_t total_link_flits = 0;
    std::uint32_t max_queue_occupancy = 0;
    std::vector<LinkFlitCount> link_flits;
    std::vector<NodeBusyRow> node_busy;
    std::string fingerprint;

    std::uint64_t dram_total_words() const { return dram_read_words + dram_write_words; }

    static std::string csv_header();
    std::string csv_row() const;
    std::string links_csv() const;
    std::string nodes_csv() const;
    std::string manifest() const;
};

std::string reports_to_csv(const std::vector<RunReport>& reports);

// Generic CSV reader for the files this tool writes (no quoting involved).
// Returns one map per data row, keyed by the header.
std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text);

std::uint64_t fnv1a64(const std::string& data);
std::string fingerprint_hex(const std::string& data);

}  // namespace tilesim

#endif
