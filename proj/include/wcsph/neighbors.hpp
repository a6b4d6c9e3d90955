#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "wcsph/vec.hpp"

namespace wcsph {

// CSR neighbor lists: neighbors of i are idx[offset[i] .. offset[i+1]).
// Lists are sorted ascending and exclude the destination itself.
struct NeighborLists {
  std::vector<std::uint32_t> offset;
  std::vector<std::uint32_t> idx;

  std::size_t count(std::size_t i) const { return offset[i + 1] - offset[i]; }
  const std::uint32_t* begin(std::size_t i) const { return idx.data() + offset[i]; }
  const std::uint32_t* end(std::size_t i) const { return idx.data() + offset[i + 1]; }
};

namespace grid_detail {

// Cell counts for a padded bounding box. Throws instead of sizing a grid for
// positions that ran away (a diverged state otherwise exhausts memory here
// before the per-step state check can catch it).
inline std::pair<int, int> dims(Vec2 lo, Vec2 hi, double cutoff) {
  const double fx = (hi.x - lo.x) / cutoff;
  const double fy = (hi.y - lo.y) / cutoff;
  if (!(fx >= 0.0) || !(fy >= 0.0) || fx * fy > 32.0e6)
    throw std::runtime_error("neighbor grid too large (diverged positions?)");
  return {std::max(1, int(fx) + 2), std::max(1, int(fy) + 2)};
}

}  // namespace grid_detail

// Uniform-grid cell list over the positions' bounding box (padded by one
// cell), cell size = cutoff, 3x3 stencil scan. Pairs kept when |xi-xj| <= cutoff.
inline NeighborLists build_neighbors(const std::vector<Vec2>& pos, double cutoff) {
  const std::size_t n = pos.size();
  NeighborLists out;
  out.offset.assign(n + 1, 0);
  if (n == 0) return out;

  Vec2 lo = pos[0], hi = pos[0];
  for (const Vec2& x : pos) {
    lo.x = std::min(lo.x, x.x); lo.y = std::min(lo.y, x.y);
    hi.x = std::max(hi.x, x.x); hi.y = std::max(hi.y, x.y);
  }
  lo.x -= cutoff; lo.y -= cutoff;
  const auto [nx, ny] = grid_detail::dims(lo, hi, cutoff);

  auto cell_of = [&](Vec2 x) {
    int cx = std::min(nx - 1, std::max(0, int((x.x - lo.x) / cutoff)));
    int cy = std::min(ny - 1, std::max(0, int((x.y - lo.y) / cutoff)));
    return cy * nx + cx;
  };

  // Counting sort of particle indices by cell.
  std::vector<std::uint32_t> cell_start(std::size_t(nx) * ny + 1, 0);
  std::vector<std::uint32_t> by_cell(n);
  std::vector<int> cell_id(n);
  for (std::size_t i = 0; i < n; ++i) {
    cell_id[i] = cell_of(pos[i]);
    ++cell_start[cell_id[i] + 1];
  }
  for (std::size_t c = 1; c < cell_start.size(); ++c) cell_start[c] += cell_start[c - 1];
  {
    std::vector<std::uint32_t> cursor(cell_start.begin(), cell_start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) by_cell[cursor[cell_id[i]]++] = std::uint32_t(i);
  }

  const double cut2 = cutoff * cutoff;
  std::vector<std::uint32_t> counts(n, 0);
  auto scan = [&](std::size_t i, auto&& emit) {
    const int cx = cell_id[i] % nx, cy = cell_id[i] / nx;
    for (int dy = -1; dy <= 1; ++dy) {
      const int yy = cy + dy;
      if (yy < 0 || yy >= ny) continue;
      for (int dx = -1; dx <= 1; ++dx) {
        const int xx = cx + dx;
        if (xx < 0 || xx >= nx) continue;
        const int c = yy * nx + xx;
        for (std::uint32_t k = cell_start[c]; k < cell_start[c + 1]; ++k) {
          const std::uint32_t j = by_cell[k];
          if (j == i) continue;
          if (norm2(pos[i] - pos[j]) <= cut2) emit(j);
        }
      }
    }
  };

#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i)
    scan(std::size_t(i), [&](std::uint32_t) { ++counts[i]; });

  for (std::size_t i = 0; i < n; ++i) out.offset[i + 1] = out.offset[i] + counts[i];
  out.idx.resize(out.offset[n]);

#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i) {
    std::uint32_t* dst = out.idx.data() + out.offset[i];
    scan(std::size_t(i), [&](std::uint32_t j) { *dst++ = j; });
    std::sort(out.idx.data() + out.offset[i], dst);
  }
  return out;
}

// Grid for querying particles near arbitrary points (virtual/mirror/stencil
// probes). Same cell structure as build_neighbors but queried by position.
struct PointGrid {
  double cutoff = 0.0;
  Vec2 lo{};
  int nx = 0, ny = 0;
  std::vector<std::uint32_t> cell_start;
  std::vector<std::uint32_t> by_cell;

  void build(const std::vector<Vec2>& pos, double cutoff_) {
    cutoff = cutoff_;
    const std::size_t n = pos.size();
    lo = n ? pos[0] : Vec2{};
    Vec2 hi = lo;
    for (const Vec2& x : pos) {
      lo.x = std::min(lo.x, x.x); lo.y = std::min(lo.y, x.y);
      hi.x = std::max(hi.x, x.x); hi.y = std::max(hi.y, x.y);
    }
    lo.x -= cutoff; lo.y -= cutoff;
    std::tie(nx, ny) = grid_detail::dims(lo, hi, cutoff);
    cell_start.assign(std::size_t(nx) * ny + 1, 0);
    by_cell.resize(n);
    std::vector<int> cell_id(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int cx = std::min(nx - 1, std::max(0, int((pos[i].x - lo.x) / cutoff)));
      const int cy = std::min(ny - 1, std::max(0, int((pos[i].y - lo.y) / cutoff)));
      cell_id[i] = cy * nx + cx;
      ++cell_start[cell_id[i] + 1];
    }
    for (std::size_t c = 1; c < cell_start.size(); ++c) cell_start[c] += cell_start[c - 1];
    std::vector<std::uint32_t> cursor(cell_start.begin(), cell_start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) by_cell[cursor[cell_id[i]]++] = std::uint32_t(i);
  }

  // Calls f(j) for every particle with |x - pos_j| <= cutoff, ascending j
  // within each cell scan (cells scanned row-major, so overall order is
  // deterministic for fixed inputs).
  template <class F>
  void for_each_near(const std::vector<Vec2>& pos, Vec2 x, F&& f) const {
    const int cx = std::min(nx - 1, std::max(0, int((x.x - lo.x) / cutoff)));
    const int cy = std::min(ny - 1, std::max(0, int((x.y - lo.y) / cutoff)));
    const double cut2 = cutoff * cutoff;
    for (int dy = -1; dy <= 1; ++dy) {
      const int yy = cy + dy;
      if (yy < 0 || yy >= ny) continue;
      for (int dx = -1; dx <= 1; ++dx) {
        const int xx = cx + dx;
        if (xx < 0 || xx >= nx) continue;
        const int c = yy * nx + xx;
        for (std::uint32_t k = cell_start[c]; k < cell_start[c + 1]; ++k) {
          const std::uint32_t j = by_cell[k];
          if (norm2(x - pos[j]) <= cut2) f(j);
        }
      }
    }
  }
};

// Reference O(n^2) scan with the same inclusion predicate; test oracle.
inline NeighborLists brute_force_neighbors(const std::vector<Vec2>& pos, double cutoff) {
  const std::size_t n = pos.size();
  const double cut2 = cutoff * cutoff;
  NeighborLists out;
  out.offset.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && norm2(pos[i] - pos[j]) <= cut2) ++out.offset[i + 1];
    out.offset[i + 1] += out.offset[i];
  }
  out.idx.resize(out.offset[n]);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && norm2(pos[i] - pos[j]) <= cut2) out.idx[k++] = std::uint32_t(j);
  return out;
}

}  // namespace wcsph
