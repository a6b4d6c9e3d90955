#pragma once

// Inlet/outlet treatments for the channel: do-nothing outflow, mirrored
// extrapolation (with and without the gradient term), and the hybrid
// characteristics-based update. Also the buffer recycling that turns inlet
// particles into fluid and retires fluid through the outlet.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "wcsph/operators.hpp"
#include "wcsph/sim_state.hpp"

namespace wcsph {

// Characteristic variables relative to a reference state, and their exact
// inverse. J1 carries entropy, J2/J3 the downstream/upstream acoustic waves.
struct CharJ {
  double j1 = 0.0, j2 = 0.0, j3 = 0.0;
};

struct CharState {
  double rho = 0.0, u = 0.0, p = 0.0;
};

inline CharJ characteristics_decompose(const CharState& st, const HybridRef& ref, double c_o) {
  CharJ j;
  j.j1 = -c_o * c_o * (st.rho - ref.rho) + (st.p - ref.p);
  j.j2 = st.rho * c_o * (st.u - ref.u) + (st.p - ref.p);
  j.j3 = -st.rho * c_o * (st.u - ref.u) + (st.p - ref.p);
  return j;
}

inline CharState characteristics_recompose(const CharJ& j, const HybridRef& ref, double c_o) {
  CharState st;
  st.rho = ref.rho + (-j.j1 + 0.5 * j.j2 + 0.5 * j.j3) / (c_o * c_o);
  st.u = ref.u + (j.j2 - j.j3) / (2.0 * st.rho * c_o);
  st.p = ref.p + 0.5 * (j.j2 + j.j3);
  return st;
}

namespace io_detail {

// Buffer columns extend 6 dx beyond each interface.
inline double buffer_depth(const SimState& s) { return 6.0 * s.dom.dx; }

inline const Interface& side_interface(const SimState& s, int side) {
  return s.dom.interfaces[side];  // 0 = inlet, 1 = outlet by construction
}

inline bool side_uses_method(const SimState& s, int side) {
  return s.io_test_side < 0 || s.io_test_side == side;
}

// Seed the hybrid reference from the near-boundary fluid mean, then keep a
// gated exponential moving average of it: samples whose pressure strays more
// than 5% of rho_o c_o U from the current reference are treated as acoustic
// noise and skipped.
inline void update_hybrid_refs(SimState& s) {
  const auto& ps = s.ps();
  const double band = 3.0 * ps.h;
  for (int side = 0; side < 2; ++side) {
    if (!side_uses_method(s, side) || s.io_method != OpenMethod::Hybrid) continue;
    const Interface& iface = side_interface(s, side);
    HybridRef& ref = s.refs[side];
    const double gate = 0.05 * s.cfg.eos.rho_o * s.cfg.eos.c_o * s.ref_gate_u;
    double rho = 0.0, u = 0.0, v = 0.0, p = 0.0;
    long cnt = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (ps.tag[i] != Tag::Fluid) continue;
      if (iface.signed_dist(ps.pos[i]) > band) continue;
      if (ref.initialized && std::abs(ps.p[i] - ref.p) > gate) continue;
      rho += ps.rho[i];
      u += ps.vel[i].x;
      v += ps.vel[i].y;
      p += ps.p[i];
      ++cnt;
    }
    if (cnt == 0) continue;
    const double inv = 1.0 / double(cnt);
    if (!ref.initialized) {
      ref = {rho * inv, u * inv, v * inv, p * inv, true};
    } else {
      const double a = 1.0 / double(s.ref_window);
      ref.rho += a * (rho * inv - ref.rho);
      ref.u += a * (u * inv - ref.u);
      ref.v += a * (v * inv - ref.v);
      ref.p += a * (p * inv - ref.p);
    }
  }
}

}  // namespace io_detail

// Per-stage update of buffer-particle state. Fluid-side fields must already
// hold stage values (pressure from the EOS in particular).
inline void apply_open_bc(SimState& s, double t) {
  if (!s.dom.has_io) return;
  auto& ps = s.ps();
  const KernelSpec kern(ps.h);
  const std::size_t n = ps.size();

  s.velx.resize(n);
  s.vely.resize(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i) {
    s.velx[i] = ps.vel[i].x;
    s.vely[i] = ps.vel[i].y;
  }

  long empty = 0;
#pragma omp parallel
  {
    std::vector<std::uint32_t> js;
    js.reserve(64);
#pragma omp for schedule(static) reduction(+ : empty)
    for (long long i = 0; i < (long long)n; ++i) {
      const Tag tg = ps.tag[i];
      if (tg != Tag::Inlet && tg != Tag::Outlet) continue;
      const int side = tg == Tag::Inlet ? 0 : 1;

      if (!io_detail::side_uses_method(s, side)) {
        // Auxiliary side held at the manufactured state.
        pin_to_ms(s, i, t);
        continue;
      }

      switch (s.io_method) {
        case OpenMethod::DoNothing:
          break;  // state frozen at crossing, advected as-is

        case OpenMethod::SimpleMirror:
        case OpenMethod::Mirror: {
          const Interface& iface = io_detail::side_interface(s, side);
          const Vec2 m = iface.reflect(ps.pos[i]);
          js.clear();
          s.grid.for_each_near(ps.pos, m, [&](std::uint32_t j) {
            if (ps.tag[j] == Tag::Fluid) js.push_back(j);
          });
          const auto fit =
              mls_point<3>(m, js, ps.pos, ps.vol, {&s.velx, &s.vely, &ps.p}, kern);
          if (fit[0].empty) {
            ++empty;  // keep previous state
            break;
          }
          Vec2 u{fit[0].value, fit[1].value};
          double p = fit[2].value;
          if (s.io_method == OpenMethod::Mirror) {
            const Vec2 d = ps.pos[i] - m;
            u.x += dot(fit[0].grad, d);
            u.y += dot(fit[1].grad, d);
            p += dot(fit[2].grad, d);
          }
          ps.vel[i] = u;
          ps.p[i] = p;
          ps.rho[i] = s.cfg.eos.density(p);
          break;
        }

        case OpenMethod::Hybrid: {
          const HybridRef& ref = s.refs[side];
          const double c_o = s.cfg.eos.c_o;
          double wsum = 0.0, j1 = 0.0, j2 = 0.0, j3 = 0.0, v = 0.0;
          for (const auto* j = s.nl.begin(i); j != s.nl.end(i); ++j) {
            if (ps.tag[*j] != Tag::Fluid) continue;
            const double w = kern.value(norm(ps.pos[i] - ps.pos[*j]));
            const CharJ cj = characteristics_decompose(
                {ps.rho[*j], ps.vel[*j].x, ps.p[*j]}, ref, c_o);
            wsum += w;
            j1 += w * cj.j1;
            j2 += w * cj.j2;
            j3 += w * cj.j3;
            v += w * ps.vel[*j].y;
          }
          if (wsum <= 0.0) {
            ++empty;  // keep previous state
            break;
          }
          CharJ cj;
          if (side == 0) {
            cj = {0.0, 0.0, j3 / wsum};  // only the upstream wave enters
          } else {
            cj = {j1 / wsum, j2 / wsum, 0.0};  // downstream waves leave
          }
          const CharState st = characteristics_recompose(cj, ref, c_o);
          ps.rho[i] = st.rho;
          ps.p[i] = st.p;
          ps.vel[i] = {st.u, v / wsum};
          break;
        }

        case OpenMethod::None:
          break;
      }
    }
  }
  s.diag.empty_supports += empty;
}

// Once per step, before the stage snapshot: move particles between the fluid
// and the buffers, seed fresh inlet particles, retire outlet particles that
// left the buffer. Serial by design (mutates the particle arrays).
inline void recycle_buffers(SimState& s) {
  if (!s.dom.has_io) return;
  auto& ps = s.ps();
  const double depth = io_detail::buffer_depth(s);

  const Interface& in_if = io_detail::side_interface(s, 0);
  const Interface& out_if = io_detail::side_interface(s, 1);

  // Crossings. New inlet particles are appended behind the crossing one.
  const std::size_t n0 = ps.size();
  for (std::size_t i = 0; i < n0; ++i) {
    switch (ps.tag[i]) {
      case Tag::Inlet:
        if (in_if.signed_dist(ps.pos[i]) >= 0.0) {
          ps.tag[i] = Tag::Fluid;
          s.dom.surface[i] = -1;
          const Vec2 seed = ps.pos[i] - depth * in_if.normal_at(ps.pos[i]);
          const std::size_t m = s.dom.append_particle(seed, Tag::Inlet, 0, false);
          ps.vel[m] = ps.vel[i];
          ps.rho[m] = ps.rho[i];
          ps.p[m] = ps.p[i];
        }
        break;
      case Tag::Fluid:
        if (out_if.signed_dist(ps.pos[i]) <= 0.0) {
          ps.tag[i] = Tag::Outlet;
          s.dom.surface[i] = 1;
        } else if (in_if.signed_dist(ps.pos[i]) < 0.0) {
          ps.tag[i] = Tag::Inlet;
          s.dom.surface[i] = 0;
        }
        break;
      default:
        break;
    }
  }

  // Retire outlet particles beyond the buffer (reverse scan keeps swap-remove
  // indices valid).
  for (std::size_t i = ps.size(); i-- > 0;) {
    if (ps.tag[i] == Tag::Outlet && out_if.signed_dist(ps.pos[i]) < -depth)
      s.dom.swap_remove_particle(i);
  }

  if (s.io_method == OpenMethod::Hybrid) io_detail::update_hybrid_refs(s);
}

}  // namespace wcsph
