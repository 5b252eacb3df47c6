#pragma once

#include <cstdint>
#include <vector>

namespace medc::envs {

struct Cell {
  int r = 0;
  int c = 0;
  bool operator==(const Cell&) const = default;
};

// 8 compass moves plus stay. Index 0 is stay; 1..8 run clockwise from north.
inline constexpr int kNumActions = 9;
inline constexpr int kDr[kNumActions] = {0, -1, -1, 0, 1, 1, 1, 0, -1};
inline constexpr int kDc[kNumActions] = {0, 0, 1, 1, 1, 0, -1, -1, -1};

// Reverses the movement direction; stay maps to itself.
inline int opposite_action(int a) { return a == 0 ? 0 : (a - 1 + 4) % 8 + 1; }

inline constexpr int kUnreachable = -1;

// Binary occupancy grid, row-major.
struct WallMap {
  int h = 0, w = 0;
  std::vector<uint8_t> cells;

  WallMap() = default;
  WallMap(int h_, int w_) : h(h_), w(w_), cells(size_t(h_) * w_, 0) {}
  bool at(int r, int c) const { return cells[size_t(r) * w + c] != 0; }
  void set(int r, int c, bool v) { cells[size_t(r) * w + c] = v ? 1 : 0; }
  bool in_bounds(int r, int c) const { return r >= 0 && r < h && c >= 0 && c < w; }
  int count() const {
    int n = 0;
    for (uint8_t v : cells) n += v;
    return n;
  }
};

// Shortest 8-connected wall-avoiding path length, or kUnreachable.
int bfs_distance(const WallMap& walls, Cell from, Cell to);

// Number of wall cells whose interior is crossed by the open segment between
// the centers of `from` and `to`. Exact integer arithmetic; touching only a
// cell's boundary (corner grazes) does not count.
int walls_crossed(const WallMap& walls, Cell from, Cell to);

}  // namespace medc::envs
