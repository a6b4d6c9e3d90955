#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wcsph/neighbors.hpp"
#include "wcsph/operators.hpp"
#include "wcsph/particles.hpp"

namespace wcsph {

// A boundary interface: straight line or circle. Signed distances are
// positive on the fluid side; normals point into the fluid.
struct Interface {
  enum class Kind { Line, Circle } kind = Kind::Line;
  // Line: anchor point + constant into-fluid unit normal.
  Vec2 a{}, n{};
  // Circle: fluid_side +1 means the fluid lies outside (convex body).
  Vec2 center{};
  double radius = 0.0;
  int fluid_side = +1;

  static Interface line(Vec2 anchor, Vec2 into_fluid) {
    Interface s;
    s.kind = Kind::Line;
    s.a = anchor;
    s.n = (1.0 / norm(into_fluid)) * into_fluid;
    return s;
  }
  static Interface circle(Vec2 c, double r, int fluid_side_) {
    Interface s;
    s.kind = Kind::Circle;
    s.center = c;
    s.radius = r;
    s.fluid_side = fluid_side_;
    return s;
  }

  double signed_dist(Vec2 x) const {
    if (kind == Kind::Line) return dot(x - a, n);
    return fluid_side * (norm(x - center) - radius);
  }
  Vec2 normal_at(Vec2 x) const {
    if (kind == Kind::Line) return n;
    const Vec2 d = x - center;
    const double r = norm(d);
    if (r < 1e-14) return {1.0, 0.0};
    return (double(fluid_side) / r) * d;
  }
  Vec2 project(Vec2 x) const {
    if (kind == Kind::Line) return x - signed_dist(x) * n;
    const Vec2 d = x - center;
    const double r = norm(d);
    if (r < 1e-14) return center + Vec2{radius, 0.0};
    return center + (radius / r) * d;
  }
  Vec2 reflect(Vec2 x) const {
    if (kind == Kind::Line) return x - 2.0 * signed_dist(x) * n;
    const Vec2 d = x - center;
    const double r = norm(d);
    if (r < 1e-14) return x;
    return center + ((2.0 * radius - r) / r) * d;
  }
  // Closest point on the fluid-side surface offset by `d`.
  Vec2 offset_project(Vec2 x, double d) const {
    if (kind == Kind::Line) return project(x) + d * n;
    const Vec2 q = x - center;
    const double r = std::max(norm(q), 1e-14);
    return center + ((radius + fluid_side * d) / r) * q;
  }
};

enum class Shape { Straight, Convex, Concave, PackedConvex, PackedConcave, IoChannel };

inline Shape shape_from_string(const std::string& s) {
  if (s == "straight") return Shape::Straight;
  if (s == "convex") return Shape::Convex;
  if (s == "concave") return Shape::Concave;
  if (s == "packed-convex") return Shape::PackedConvex;
  if (s == "packed-concave") return Shape::PackedConcave;
  if (s == "io-channel") return Shape::IoChannel;
  throw std::invalid_argument("unknown domain shape: " + s);
}

inline const char* to_string(Shape s) {
  switch (s) {
    case Shape::Straight: return "straight";
    case Shape::Convex: return "convex";
    case Shape::Concave: return "concave";
    case Shape::PackedConvex: return "packed-convex";
    case Shape::PackedConcave: return "packed-concave";
    case Shape::IoChannel: return "io-channel";
  }
  return "?";
}

// Layer structure of the tested surface. `layers == 0` means the method
// creates its own boundary particles (mirrored fluid); `on_surface` puts a
// single row of particles exactly on the interface.
struct TestSurfaceSpec {
  int layers = 6;
  bool on_surface = false;
};

struct Domain {
  ParticleSet ps;
  std::vector<Interface> interfaces;
  std::vector<int> surface;  // per particle: interface id, -1 for fluid
  std::vector<char> green;   // per particle: MS-pinned boundary particle
  int test_interface = -1;   // -1 when no solid surface is under test
  bool has_io = false;
  double dx = 0.0;

  bool in_fluid_region(Vec2 x) const {
    for (const Interface& s : interfaces)
      if (s.signed_dist(x) <= 0.0) return false;
    return true;
  }

  std::size_t append_particle(Vec2 x, Tag t, int surf, bool is_green) {
    const std::size_t i = ps.append(x, t);
    surface.push_back(surf);
    green.push_back(is_green ? 1 : 0);
    if (surf >= 0) ps.normal[i] = interfaces[surf].normal_at(x);
    return i;
  }

  void swap_remove_particle(std::size_t i) {
    ps.swap_remove(i);
    surface[i] = surface.back();
    surface.pop_back();
    green[i] = green.back();
    green.pop_back();
  }

  // Drop particles [n, size) — used for per-step rebuilt tail blocks.
  void truncate(std::size_t n) {
    ps.resize(n);
    surface.resize(n);
    green.resize(n);
  }
};

struct DomainConfig {
  Shape shape = Shape::Straight;
  double dx = 0.01;
  TestSurfaceSpec test;
  int green_layers = 6;
  int pack_max_iter = 500;
};

namespace geom_detail {

constexpr Vec2 kAnnulusCenter{0.5, 0.5};
constexpr double kInnerR = 0.25;
constexpr double kOuterR = 0.5;

// Equally spaced ring of boundary particles at radius r.
inline void append_ring(Domain& dom, double r, int surf, bool is_green) {
  const int n = std::max(6, int(std::lround(2.0 * M_PI * r / dom.dx)));
  for (int m = 0; m < n; ++m) {
    const double th = 2.0 * M_PI * m / n;
    dom.append_particle(kAnnulusCenter + Vec2{r * std::cos(th), r * std::sin(th)}, Tag::Solid,
                        surf, is_green);
  }
}

// Test-surface particle block on a circle of radius R; `inner` chooses the
// solid side (inside for the inner circle, outside for the outer).
inline void append_circle_ghosts(Domain& dom, double R, bool solid_inside,
                                 const TestSurfaceSpec& spec, int surf, bool is_green,
                                 bool rings) {
  if (spec.layers == 0) return;
  if (spec.on_surface) {
    append_ring(dom, R, surf, is_green);
    return;
  }
  if (rings) {
    for (int k = 1; k <= spec.layers; ++k) {
      const double r = solid_inside ? R - (k - 0.5) * dom.dx : R + (k - 0.5) * dom.dx;
      if (r <= 0.49 * dom.dx) break;
      append_ring(dom, r, surf, is_green);
    }
    return;
  }
  // Staircase lattice cut to the annular band of the solid side.
  const double dx = dom.dx;
  const double lo = solid_inside ? R - spec.layers * dx : R;
  const double hi = solid_inside ? R : R + spec.layers * dx;
  const int imin = int(std::floor((kAnnulusCenter.x - hi) / dx)) - 1;
  const int imax = int(std::ceil((kAnnulusCenter.x + hi) / dx)) + 1;
  for (int i = imin; i <= imax; ++i)
    for (int j = imin; j <= imax; ++j) {
      const Vec2 x{(i + 0.5) * dx, (j + 0.5) * dx};
      const double r = norm(x - kAnnulusCenter);
      const bool in_band = solid_inside ? (r <= R && r > std::max(lo, 0.0))
                                        : (r >= R && r < hi);
      if (in_band) dom.append_particle(x, Tag::Solid, surf, is_green);
    }
}

}  // namespace geom_detail

// Frozen-boundary relaxation of annulus fluid particles. The fluid layer
// initially nearest each interface is bound to it: every sweep it is
// projected back onto the dx/2 offset circle (radius fixed, tangentially
// free), so the first layer hugs the surface while kernel-gradient repulsion
// spreads the interior against it. Boundary particles never move. Returns
// the number of sweeps used (== max_iter when not converged).
inline int pack_annulus(Domain& dom, int max_iter = 500) {
  using namespace geom_detail;
  const double dx = dom.dx;
  const KernelSpec kern(dom.ps.h);
  const double gain = 0.25 * dom.ps.h * dom.ps.h;
  const double cap = 0.1 * dx;

  std::vector<int> bound(dom.ps.size(), -1);
  for (std::size_t i = 0; i < dom.ps.size(); ++i) {
    if (dom.ps.tag[i] != Tag::Fluid) continue;
    for (std::size_t k = 0; k < dom.interfaces.size(); ++k)
      if (dom.interfaces[k].signed_dist(dom.ps.pos[i]) < dx) {
        bound[i] = int(k);
        dom.ps.pos[i] = dom.interfaces[k].offset_project(dom.ps.pos[i], 0.5 * dx);
        break;
      }
  }

  int it = 1;
  for (; it <= max_iter; ++it) {
    const NeighborLists nl = build_neighbors(dom.ps.pos, kern.support());
    compute_volumes(dom.ps, nl);
    std::vector<Vec2> delta(dom.ps.size(), Vec2{});
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < (long long)dom.ps.size(); ++i) {
      if (dom.ps.tag[i] != Tag::Fluid) continue;
      Vec2 acc{};
      for (const auto* j = nl.begin(i); j != nl.end(i); ++j)
        acc += dom.ps.vol[*j] * kern.grad(dom.ps.pos[i] - dom.ps.pos[*j]);
      Vec2 d = -gain * acc;
      const double dn = norm(d);
      if (dn > cap) d = (cap / dn) * d;
      delta[i] = d;
    }
    double maxdisp = 0.0;
    for (std::size_t i = 0; i < dom.ps.size(); ++i) {
      if (dom.ps.tag[i] != Tag::Fluid) continue;
      Vec2 x = dom.ps.pos[i] + delta[i];
      if (bound[i] >= 0) {
        x = dom.interfaces[bound[i]].offset_project(x, 0.5 * dx);
      } else {
        // Interior particles may drift tangentially between ring particles;
        // keep them out of the solid.
        for (const Interface& s : dom.interfaces)
          if (s.signed_dist(x) < 0.3 * dx) x = s.offset_project(x, 0.5 * dx);
      }
      maxdisp = std::max(maxdisp, norm(x - dom.ps.pos[i]));
      dom.ps.pos[i] = x;
    }
    if (maxdisp < 1e-3 * dx) break;
  }
  return std::min(it, max_iter);
}

inline Domain generate_domain(const DomainConfig& cfg) {
  using namespace geom_detail;
  Domain dom;
  dom.dx = cfg.dx;
  dom.ps.h = 1.2 * cfg.dx;
  const double dx = cfg.dx;
  const int n = int(std::lround(1.0 / dx));
  const int gl = cfg.green_layers;

  switch (cfg.shape) {
    case Shape::Straight: {
      // Fluid cell centers in the unit square; tested wall at y = 1 spans the
      // full frame width so fluid corners keep top support; green slabs on
      // the other three sides (bottom slab full width, side slabs beside the
      // fluid column only).
      dom.interfaces = {
          Interface::line({0.0, 1.0}, {0.0, -1.0}),  // test wall
          Interface::line({0.0, 0.0}, {0.0, 1.0}),
          Interface::line({0.0, 0.0}, {1.0, 0.0}),
          Interface::line({1.0, 0.0}, {-1.0, 0.0}),
      };
      dom.test_interface = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          dom.append_particle({(i + 0.5) * dx, (j + 0.5) * dx}, Tag::Fluid, -1, false);
      // Tested wall spans exactly the unit width; the green side slabs extend
      // past y = 1 so corner truncation stays isolated from the tested method.
      if (cfg.test.on_surface) {
        for (int i = 0; i < n; ++i)
          dom.append_particle({(i + 0.5) * dx, 1.0}, Tag::Solid, 0, false);
      } else {
        for (int k = 1; k <= cfg.test.layers; ++k)
          for (int i = 0; i < n; ++i)
            dom.append_particle({(i + 0.5) * dx, 1.0 + (k - 0.5) * dx}, Tag::Solid, 0, false);
      }
      for (int k = 1; k <= gl; ++k) {
        for (int i = -gl; i < n + gl; ++i)  // bottom, full width
          dom.append_particle({(i + 0.5) * dx, -(k - 0.5) * dx}, Tag::Solid, 1, true);
        for (int j = 0; j < n + gl; ++j) {  // left and right, up past the corners
          dom.append_particle({-(k - 0.5) * dx, (j + 0.5) * dx}, Tag::Solid, 2, true);
          dom.append_particle({1.0 + (k - 0.5) * dx, (j + 0.5) * dx}, Tag::Solid, 3, true);
        }
      }
      break;
    }

    case Shape::Convex:
    case Shape::Concave:
    case Shape::PackedConvex:
    case Shape::PackedConcave: {
      const bool packed = cfg.shape == Shape::PackedConvex || cfg.shape == Shape::PackedConcave;
      const bool test_inner = cfg.shape == Shape::Convex || cfg.shape == Shape::PackedConvex;
      const Interface inner = Interface::circle(kAnnulusCenter, kInnerR, +1);
      const Interface outer = Interface::circle(kAnnulusCenter, kOuterR, -1);
      dom.interfaces = test_inner ? std::vector<Interface>{inner, outer}
                                  : std::vector<Interface>{outer, inner};
      dom.test_interface = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Vec2 x{(i + 0.5) * dx, (j + 0.5) * dx};
          const double r = norm(x - kAnnulusCenter);
          if (r > kInnerR && r < kOuterR) dom.append_particle(x, Tag::Fluid, -1, false);
        }
      const TestSurfaceSpec green_spec{gl, false};
      if (test_inner) {
        append_circle_ghosts(dom, kInnerR, true, cfg.test, 0, false, packed);
        append_circle_ghosts(dom, kOuterR, false, green_spec, 1, true, packed);
      } else {
        append_circle_ghosts(dom, kOuterR, false, cfg.test, 0, false, packed);
        append_circle_ghosts(dom, kInnerR, true, green_spec, 1, true, packed);
      }
      if (packed) pack_annulus(dom, cfg.pack_max_iter);
      break;
    }

    case Shape::IoChannel: {
      // Unit-square fluid, 6-column inlet/outlet buffers, green wall slabs
      // spanning the buffers with margin.
      dom.interfaces = {
          Interface::line({0.0, 0.0}, {1.0, 0.0}),   // inlet x = 0
          Interface::line({1.0, 0.0}, {-1.0, 0.0}),  // outlet x = 1
          Interface::line({0.0, 0.0}, {0.0, 1.0}),   // bottom wall
          Interface::line({0.0, 1.0}, {0.0, -1.0}),  // top wall
      };
      dom.has_io = true;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          dom.append_particle({(i + 0.5) * dx, (j + 0.5) * dx}, Tag::Fluid, -1, false);
      for (int k = 1; k <= 6; ++k)
        for (int j = 0; j < n; ++j) {
          dom.append_particle({-(k - 0.5) * dx, (j + 0.5) * dx}, Tag::Inlet, 0, false);
          dom.append_particle({1.0 + (k - 0.5) * dx, (j + 0.5) * dx}, Tag::Outlet, 1, false);
        }
      for (int k = 1; k <= gl; ++k)
        for (int i = -12; i < n + 12; ++i) {
          dom.append_particle({(i + 0.5) * dx, -(k - 0.5) * dx}, Tag::Solid, 2, true);
          dom.append_particle({(i + 0.5) * dx, 1.0 + (k - 0.5) * dx}, Tag::Solid, 3, true);
        }
      break;
    }
  }
  return dom;
}

// Plain unit-square lattice with no boundary particles (operator studies).
inline ParticleSet lattice_square(double dx) {
  ParticleSet ps;
  ps.h = 1.2 * dx;
  const int n = int(std::lround(1.0 / dx));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ps.append({(i + 0.5) * dx, (j + 0.5) * dx}, Tag::Fluid);
  return ps;
}

}  // namespace wcsph
