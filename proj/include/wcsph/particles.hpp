#pragma once

#include <cstdint>
#include <vector>

#include "wcsph/vec.hpp"

namespace wcsph {

enum class Tag : std::uint8_t { Fluid, Solid, Inlet, Outlet, Virtual };

// Structure-of-arrays particle storage. All arrays share one length.
// `normal` is meaningful on boundary particles only (unit, points into the
// fluid); `grad_u`, `src_*` are scratch populated during a stage evaluation.
struct ParticleSet {
  std::vector<Vec2> pos;
  std::vector<Vec2> vel;
  std::vector<double> rho;
  std::vector<double> p;
  std::vector<double> vol;
  std::vector<Tag> tag;
  std::vector<Vec2> normal;
  std::vector<Mat2> grad_u;
  std::vector<Vec2> src_momentum;
  std::vector<double> src_continuity;
  double h = 0.0;

  std::size_t size() const { return pos.size(); }

  void resize(std::size_t n) {
    pos.resize(n);
    vel.resize(n);
    rho.resize(n, 1.0);
    p.resize(n, 0.0);
    vol.resize(n, 0.0);
    tag.resize(n, Tag::Fluid);
    normal.resize(n, Vec2{});
    grad_u.resize(n, Mat2{});
    src_momentum.resize(n, Vec2{});
    src_continuity.resize(n, 0.0);
  }

  std::size_t append(Vec2 x, Tag t) {
    const std::size_t i = size();
    resize(i + 1);
    pos[i] = x;
    tag[i] = t;
    return i;
  }

  // Swap-remove; returns the index that moved into slot i (or i if last).
  std::size_t swap_remove(std::size_t i) {
    const std::size_t last = size() - 1;
    if (i != last) {
      pos[i] = pos[last];
      vel[i] = vel[last];
      rho[i] = rho[last];
      p[i] = p[last];
      vol[i] = vol[last];
      tag[i] = tag[last];
      normal[i] = normal[last];
      grad_u[i] = grad_u[last];
      src_momentum[i] = src_momentum[last];
      src_continuity[i] = src_continuity[last];
    }
    resize(last);
    return last;
  }
};

}  // namespace wcsph
