#include "medc/envs/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace medc::envs {

int bfs_distance(const WallMap& walls, Cell from, Cell to) {
  if (!walls.in_bounds(from.r, from.c) || !walls.in_bounds(to.r, to.c))
    throw std::invalid_argument("bfs_distance: endpoint off grid");
  if (walls.at(to.r, to.c) || walls.at(from.r, from.c)) return kUnreachable;
  if (from == to) return 0;
  std::vector<int> dist(size_t(walls.h) * walls.w, -1);
  std::vector<Cell> queue{from};
  dist[size_t(from.r) * walls.w + from.c] = 0;
  size_t head = 0;
  while (head < queue.size()) {
    const Cell cur = queue[head++];
    const int d = dist[size_t(cur.r) * walls.w + cur.c];
    for (int a = 1; a < kNumActions; ++a) {
      const int nr = cur.r + kDr[a], nc = cur.c + kDc[a];
      if (!walls.in_bounds(nr, nc) || walls.at(nr, nc)) continue;
      int& dn = dist[size_t(nr) * walls.w + nc];
      if (dn >= 0) continue;
      dn = d + 1;
      if (nr == to.r && nc == to.c) return dn;
      queue.push_back({nr, nc});
    }
  }
  return kUnreachable;
}

namespace {

// Rational with positive denominator, for exact clipping comparisons.
struct Frac {
  int64_t num, den;
};
inline bool frac_lt(Frac a, Frac b) { return a.num * b.den < b.num * a.den; }

// Open segment (p0 -> p1, doubled coordinates) vs. open box (x0,x1)x(y0,y1).
bool segment_hits_open_box(int p0x, int p0y, int p1x, int p1y, int x0, int x1,
                           int y0, int y1) {
  Frac lo{0, 1}, hi{1, 1};
  const int d[2] = {p1x - p0x, p1y - p0y};
  const int p[2] = {p0x, p0y};
  const int b0[2] = {x0, y0}, b1[2] = {x1, y1};
  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] == 0) {
      if (!(p[axis] > b0[axis] && p[axis] < b1[axis])) return false;
      continue;
    }
    Frac t0{b0[axis] - p[axis], d[axis]};
    Frac t1{b1[axis] - p[axis], d[axis]};
    if (t0.den < 0) { t0.num = -t0.num; t0.den = -t0.den; }
    if (t1.den < 0) { t1.num = -t1.num; t1.den = -t1.den; }
    if (frac_lt(t1, t0)) std::swap(t0, t1);
    if (frac_lt(lo, t0)) lo = t0;
    if (frac_lt(t1, hi)) hi = t1;
  }
  return frac_lt(lo, hi);
}

}  // namespace

int walls_crossed(const WallMap& walls, Cell from, Cell to) {
  if (from == to) return 0;
  const int p0x = 2 * from.c + 1, p0y = 2 * from.r + 1;
  const int p1x = 2 * to.c + 1, p1y = 2 * to.r + 1;
  const int rlo = std::min(from.r, to.r), rhi = std::max(from.r, to.r);
  const int clo = std::min(from.c, to.c), chi = std::max(from.c, to.c);
  int crossed = 0;
  for (int r = rlo; r <= rhi; ++r)
    for (int c = clo; c <= chi; ++c) {
      if (!walls.at(r, c)) continue;
      if ((r == from.r && c == from.c) || (r == to.r && c == to.c)) continue;
      if (segment_hits_open_box(p0x, p0y, p1x, p1y, 2 * c, 2 * c + 2, 2 * r,
                                2 * r + 2))
        ++crossed;
    }
  return crossed;
}

}  // namespace medc::envs
