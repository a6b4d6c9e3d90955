#pragma once

// Weakly-compressible stepping: per-stage field evaluation (neighbours,
// volumes, corrections, boundary state), right-hand-side assembly for the
// continuity and momentum equations, the midpoint second-order update, and
// the periodic implicit particle-shifting pass.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wcsph/open_bc.hpp"
#include "wcsph/operators.hpp"
#include "wcsph/sim_state.hpp"
#include "wcsph/solid_bc.hpp"

namespace wcsph {

// Rebuilds stage geometry and boundary state at stage time t: neighbour
// lists, volumes, gradient corrections, fluid pressure from the EOS, then the
// open-boundary and wall-boundary updates.
inline void prepare_stage(SimState& s, double t) {
  auto& ps = s.ps();
  const std::size_t n = ps.size();
  const double cut = 3.0 * ps.h;

  s.nl = build_neighbors(ps.pos, cut);
  s.grid.build(ps.pos, cut);
  compute_volumes(ps, s.nl);
  if (s.cfg.hash_variant & 32) {  // TODO(experiment): remove
    static const double wall_k = std::getenv("WALLK") ? std::atof(std::getenv("WALLK")) : 1.0;
    const double v0 = wall_k * (ps.h / 1.2) * (ps.h / 1.2);
    for (std::size_t i = 0; i < n; ++i)
      if (ps.tag[i] == Tag::Solid) ps.vol[i] = v0;
  }
  compute_corrections(ps, s.nl, s.B, s.cfg.cond_limit, &s.diag.singular_corrections);

  s.vel_slip.resize(n);
  s.vel_noslip.resize(n);
  s.k_drho_bound.assign(n, 0.0);

#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i) {
    if (ps.tag[i] == Tag::Fluid) ps.p[i] = s.cfg.eos.pressure(ps.rho[i]);
    if (s.is_fluid_like(i)) {
      s.vel_slip[i] = ps.vel[i];
      s.vel_noslip[i] = ps.vel[i];
    }
  }

  apply_open_bc(s, t);
  apply_solid_bc(s, t);
}

// Velocity gradients for every particle. Destinations and sources use their
// tag's gradient velocity: fluid-like particles their own, walls the no-slip
// extrapolation (or the slip one on physically free-slip walls, already
// folded into vel_noslip).
inline void compute_grad_u(SimState& s) {
  auto& ps = s.ps();
  const std::size_t n = ps.size();
  const KernelSpec kern(ps.h);
  s.grad_u.resize(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i) {
    const Vec2 ui = s.is_fluid_like(i) ? ps.vel[i] : s.vel_noslip[i];
    Mat2 acc{};
    for (const auto* j = s.nl.begin(i); j != s.nl.end(i); ++j) {
      const Vec2 uj = s.is_fluid_like(*j) ? ps.vel[*j] : s.vel_noslip[*j];
      const Vec2 gw = s.B[i] * kern.grad(ps.pos[i] - ps.pos[*j]);
      acc += outer(uj - ui, gw) * ps.vol[*j];
    }
    s.grad_u[i] = acc;
  }
}

// Continuity and momentum right-hand sides for fluid particles. Stage state
// must be prepared (prepare_stage + compute_grad_u).
inline void assemble_derivatives(SimState& s, double t) {
  auto& ps = s.ps();
  const std::size_t n = ps.size();
  const KernelSpec kern(ps.h);
  const double nu = s.cfg.nu;
  const double delta_coef = s.cfg.delta_sph * ps.h * s.cfg.eos.c_o;
  const double av_coef = s.cfg.art_alpha * ps.h * s.cfg.eos.c_o;

  s.k_drho.assign(n, 0.0);
  s.k_du.assign(n, Vec2{});
  s.visc_acc.assign(n, Vec2{});

#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i) {
    if (ps.tag[i] != Tag::Fluid) continue;
    const Vec2 ui = ps.vel[i];
    const double rho_i = ps.rho[i];
    const double p_i = ps.p[i];
    double div_acc = 0.0, diff_acc = 0.0;
    Vec2 pr_acc{}, visc_acc{}, av_acc{};
    for (const auto* j = s.nl.begin(i); j != s.nl.end(i); ++j) {
      const double vol_j = ps.vol[*j];
      const Vec2 gw_raw = kern.grad(ps.pos[i] - ps.pos[*j]);
      const Vec2 gw = s.B[i] * gw_raw;
      const bool fluid_like = s.is_fluid_like(*j);
      // Continuity sees the free-slip wall velocity.
      const Vec2 uc = fluid_like ? ps.vel[*j] : s.vel_slip[*j];
      div_acc += dot(uc - ui, gw) * vol_j;
      pr_acc += ((p_i - ps.p[*j]) / rho_i * vol_j) * gw;
      visc_acc += ((s.grad_u[*j] - s.grad_u[i]) * gw) * vol_j;
      if (ps.tag[*j] == Tag::Fluid) {
        const Vec2 dxji = ps.pos[*j] - ps.pos[i];
        const double w2 = 2.0 * dot(dxji, gw_raw) / norm2(dxji) * vol_j;
        if (delta_coef > 0.0) diff_acc += (ps.rho[*j] - rho_i) * w2;
        if (av_coef > 0.0) av_acc += w2 * (ps.vel[*j] - ui);
      }
    }
    double drho = -rho_i * div_acc + delta_coef * diff_acc;
    Vec2 du = pr_acc + nu * visc_acc + av_coef * av_acc + s.cfg.gravity;
    if (s.ms_enabled) {
      const MsResidues r = ms_residues(s.ms_id, ps.pos[i], t, s.cfg.eos, nu);
      drho += r.cont;
      du += r.mom;
      // Keep the manufactured state stationary under the diffusion
      // stabilizers: subtract their continuum values, delta_coef *
      // lap(rho_ms) with rho_ms = rho_o + p_ms / c_o^2, and av_coef *
      // lap(u_ms).
      if (delta_coef > 0.0) {
        const MsFuncs& f = ms(s.ms_id);
        const double lap_p = f.p_xx(ps.pos[i].x, ps.pos[i].y, t) +
                             f.p_yy(ps.pos[i].x, ps.pos[i].y, t);
        drho -= delta_coef * lap_p / (s.cfg.eos.c_o * s.cfg.eos.c_o);
      }
      if (av_coef > 0.0) {
        const MsFuncs& f = ms(s.ms_id);
        const double x = ps.pos[i].x, y = ps.pos[i].y;
        du -= av_coef * Vec2{f.u_xx(x, y, t) + f.u_yy(x, y, t),
                             f.v_xx(x, y, t) + f.v_yy(x, y, t)};
      }
    }
    s.k_drho[i] = drho;
    s.k_du[i] = du;
    s.visc_acc[i] = nu * visc_acc;
  }
}

inline void eval_stage(SimState& s, double t) {
  prepare_stage(s, t);
  compute_grad_u(s);
  assemble_derivatives(s, t);
}

namespace scheme_detail {

inline void check_finite(const SimState& s) {
  const auto& ps = s.ps();
  const double guard = s.cfg.pos_guard;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!s.is_fluid_like(i)) continue;
    if (std::isfinite(ps.pos[i].x) && std::isfinite(ps.pos[i].y) &&
        std::isfinite(ps.vel[i].x) && std::isfinite(ps.vel[i].y) && std::isfinite(ps.rho[i])) {
      if (std::abs(ps.pos[i].x) > guard || std::abs(ps.pos[i].y) > guard)
        throw std::runtime_error("particle escaped at step " + std::to_string(s.step_count) +
                                 ", particle " + std::to_string(i));
      continue;
    }
    throw std::runtime_error("non-finite particle state at step " +
                             std::to_string(s.step_count) + ", particle " + std::to_string(i));
  }
}

}  // namespace scheme_detail

// Implicit particle-shifting pass: nudge fluid particles down the kernel
// gradient of the local number density, then transport their properties to
// the shifted positions with a first-order Taylor step using pre-shift
// corrected gradients.
inline void ipst_shift(SimState& s) {
  auto& ps = s.ps();
  const std::size_t n = ps.size();
  const KernelSpec kern(ps.h);

  // Pre-shift gradients at current time for the property transfer.
  prepare_stage(s, s.t);
  compute_grad_u(s);
  const std::vector<Vec2> grad_p = corrected_gradient(ps, s.nl, s.B, ps.p);
  const std::vector<Vec2> grad_rho = corrected_gradient(ps, s.nl, s.B, ps.rho);
  const std::vector<Mat2> grad_u0 = s.grad_u;

  s.pos0 = ps.pos;
  const double gain = 0.5 * ps.h * ps.h;
  const double cap_total = 0.5 * s.dom.dx;
  const double tol = 0.01 * ps.h;
  long reverted = 0, clamped = 0;

  for (int it = 0; it < 10; ++it) {
    if (it > 0) {
      s.nl = build_neighbors(ps.pos, 3.0 * ps.h);
      compute_volumes(ps, s.nl);
    }
    double max_disp = 0.0;
#pragma omp parallel for schedule(static) reduction(max : max_disp) reduction(+ : reverted, clamped)
    for (long long i = 0; i < (long long)n; ++i) {
      if (ps.tag[i] != Tag::Fluid) continue;
      Vec2 dsum{};
      double divr = 0.0;
      for (const auto* j = s.nl.begin(i); j != s.nl.end(i); ++j) {
        const Vec2 gw = kern.grad(ps.pos[i] - ps.pos[*j]);
        dsum += ps.vol[*j] * gw;
        divr += ps.vol[*j] * dot(ps.pos[*j] - ps.pos[i], gw);
      }
      // Truncated-support particles (uncorrected div x below the bulk value
      // 2) sit against a support deficit — a bare single-layer wall. Shifting
      // would pour them into the deficit, so they stay put. Jittered interiors
      // and rows against full-depth walls stay above 1.9; the first row at a
      // single-layer wall reads ~1.7.
      if (divr < 1.85) continue;
      Vec2 x = ps.pos[i] - gain * dsum;
      // Enforce the per-call displacement cap relative to the start position.
      const Vec2 total = x - s.pos0[i];
      const double tn = norm(total);
      if (tn > cap_total) {
        x = s.pos0[i] + (cap_total / tn) * total;
        ++clamped;
      }
      if (!s.dom.in_fluid_region(x)) {
        x = s.pos0[i];  // crossing shifts are undone entirely
        ++reverted;
      }
      max_disp = std::max(max_disp, norm(x - ps.pos[i]));
      ps.pos[i] = x;
    }
    if (max_disp < tol) break;
  }
  s.diag.reverted_shifts += reverted;
  s.diag.clamped_shifts += clamped;

#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i) {
    if (ps.tag[i] != Tag::Fluid) continue;
    const Vec2 d = ps.pos[i] - s.pos0[i];
    ps.vel[i] += grad_u0[i] * d;
    ps.rho[i] += dot(grad_rho[i], d);
    ps.p[i] += dot(grad_p[i], d);
  }
}

// One midpoint step: recycle buffers and rebuild mirror ghosts, snapshot the
// integrated state, evaluate at t, advance half a step, evaluate at t+dt/2,
// and apply the midpoint derivative over the full step. Positions advance
// with the stage velocity.
inline void step(SimState& s) {
  auto& ps = s.ps();
  const double dt = s.cfg.dt;
  if (!(dt > 0.0)) throw std::runtime_error("time step not set");

  recycle_buffers(s);
  bool has_colagrossi = false;
  for (const SurfaceBc& bc : s.surf_bc)
    if (bc.method == SolidMethod::Colagrossi && bc.mask) has_colagrossi = true;
  if (has_colagrossi) rebuild_mirrors(s);

  const std::size_t n = ps.size();
  s.rho_bound.resize(n, s.cfg.eos.rho_o);
  s.hash_visc_prev.resize(n, Vec2{});
  s.hash_p_prev.resize(n, 0.0);

  s.pos0 = ps.pos;
  s.vel0 = ps.vel;
  s.rho0 = ps.rho;
  s.rho_bound0 = s.rho_bound;

  eval_stage(s, s.t);
  const double half = 0.5 * dt;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i) {
    if (ps.tag[i] == Tag::Fluid) {
      ps.pos[i] = s.pos0[i] + half * ps.vel[i];
      ps.vel[i] = s.vel0[i] + half * s.k_du[i];
      ps.rho[i] = s.rho0[i] + half * s.k_drho[i];
    } else if (s.is_fluid_like(i)) {
      ps.pos[i] = s.pos0[i] + half * ps.vel[i];
    }
    s.rho_bound[i] = s.rho_bound0[i] + half * s.k_drho_bound[i];
  }

  eval_stage(s, s.t + half);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i) {
    if (ps.tag[i] == Tag::Fluid) {
      ps.pos[i] = s.pos0[i] + dt * ps.vel[i];
      ps.vel[i] = s.vel0[i] + dt * s.k_du[i];
      ps.rho[i] = s.rho0[i] + dt * s.k_drho[i];
    } else if (s.is_fluid_like(i)) {
      ps.pos[i] = s.pos0[i] + dt * ps.vel[i];
    }
    s.rho_bound[i] = s.rho_bound0[i] + dt * s.k_drho_bound[i];
  }

  std::swap(s.hash_visc_prev, s.visc_acc);
  s.t += dt;
  ++s.step_count;

  scheme_detail::check_finite(s);

  if (s.cfg.shift_every > 0 && s.step_count % s.cfg.shift_every == 0) ipst_shift(s);

  // Leave fluid pressure consistent with the integrated density.
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)ps.size(); ++i)
    if (ps.tag[i] == Tag::Fluid) ps.p[i] = s.cfg.eos.pressure(ps.rho[i]);
}

}  // namespace wcsph
