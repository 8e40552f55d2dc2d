// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#include "tilesim/report.hpp"

#include <cstdio>
#include <sstream>

namespace tilesim {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string RunReport::csv_header() {
    return "soc,dataflow,mode,frames,seed,total_cycles,frames_per_second,"
           "dram_read_words,dram_write_words,dram_total_words,total_link_flits,"
           "max_queue_occupancy,clock_mhz,fingerprint";
}

std::string RunReport::csv_row() const {
    std::ostringstream os;
    os << soc << ',' << dataflow << ',' << mode << ',' << frames << ',' << seed << ','
       << total_cycles << ',' << format_double(frames_per_second) << ',' << dram_read_words
       << ',' << dram_write_words << ',' << dram_total_words() << ',' << total_link_flits << ','
       << max_queue_occupancy << ',' << format_double(clock_mhz) << ',' << fingerprint;
    return os.str();
}

std::string RunReport::links_csv() const {
    std::ostringstream os;
    os << "mode,plane,from_x,from_y,to_x,to_y,flits\n";
    for (const auto& l : link_flits) {
        os << mode << ',' << to_string(l.plane) << ',' << l.from.x << ',' << l.from.y << ','
           << l.to.x << ',' << l.to.y << ',' << l.flits << '\n';
    }
    return os.str();
}

std::string RunReport::nodes_csv() const {
    std::ostringstream os;
    os << "mode,node,instance,tile_x,tile_y,busy_cycles,chunks\n";
    for (const auto& n : node_busy) {
        os << mode << ',' << n.node << ',' << n.instance << ',' << n.tile.x << ',' << n.tile.y
           << ',' << n.busy_cycles << ',' << n.chunks << '\n';
    }
    return os.str();
}

std::string RunReport::manifest() const {
    std::ostringstream os;
    os << "soc: " << soc << '\n'
       << "dataflow: " << dataflow << '\n'
       << "mode: " << mode << '\n'
       << "frames: " << frames << '\n'
       << "seed: " << seed << '\n'
       << "clock_mhz: " << format_double(clock_mhz) << '\n'
       << "total_cycles: " << total_cycles << '\n'
       << "frames_per_second: " << format_double(frames_per_second) << '\n'
       << "dram_read_words: " << dram_read_words << '\n'
       << "dram_write_words: " << dram_write_words << '\n'
       << "fingerprint: " << fingerprint << '\n';
    return os.str();
}

std::string reports_to_csv(const std::vector<RunReport>& reports) {
    std::ostringstream os;
    os << RunReport::csv_header() << '\n';
    for (const auto& r : reports) os << r.csv_row() << '\n';
    return os.str();
}

std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text) {
    std::vector<std::map<std::string, std::string>> rows;
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> header;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        out.push_back(cur);
        return out;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (header.empty()) {
            header = fields;
            continue;
        }
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) {
            row[header[i]] = fields[i];
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fingerprint_hex(const std::string& data) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

}  // namespace tilesim
