// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_TYPES_HPP
#define TILESIM_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tilesim {

using Cycle = std::uint64_t;
using Word = std::uint64_t;

// Grid coordinate: x is the column, y is the row, both 0-based.
struct Coord {
    int x = 0;
    int y = 0;

    friend bool operator==(const Coord& a, const Coord& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Coord& a, const Coord& b) { return !(a == b); }
    friend bool operator<(const Coord& a, const Coord& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }
};

struct MeshDims {
    int cols = 0;
    int rows = 0;

    bool contains(Coord c) const { return c.x >= 0 && c.x < cols && c.y >= 0 && c.y < rows; }
};

inline std::string to_string(Coord c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

// Bad floorplan, bad parameters, malformed input files.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The watchdog fired: no progress for too many cycles. The message names
// the tiles that are stuck waiting on each other.
class DeadlockError : public std::runtime_error {
public:
    explicit DeadlockError(const std::string& what) : std::runtime_error(what) {}
};

class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tilesim

#endif
