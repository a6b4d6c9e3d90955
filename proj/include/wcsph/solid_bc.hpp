#pragma once

// Wall-boundary treatments. Each treatment fills ghost-particle state for one
// surface: pressure/density, the free-slip wall velocity seen by the
// continuity equation, and the velocity seen by velocity gradients and the
// viscous term. During verification runs only the property group under test
// comes from the treatment; everything else on the test surface, and all of
// the auxiliary surfaces, is pinned to the manufactured solution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "wcsph/operators.hpp"
#include "wcsph/sim_state.hpp"

namespace wcsph {

namespace bc_detail {

// Fluid-like particle indices within kernel support of an arbitrary point.
inline void fluid_near(const SimState& s, Vec2 x, std::vector<std::uint32_t>& js) {
  js.clear();
  const auto& tag = s.ps().tag;
  s.grid.for_each_near(s.ps().pos, x, [&](std::uint32_t j) {
    const Tag tg = tag[j];
    if (tg == Tag::Fluid || tg == Tag::Inlet || tg == Tag::Outlet) js.push_back(j);
  });
}

inline Vec2 reflect_velocity(Vec2 u, Vec2 n) { return u - 2.0 * dot(u, n) * n; }

// marrone_simulating_2011: ghost state interpolated (first-order MLS) at the
// mirrored "virtual" point inside the fluid; the wall condition is imposed by
// reflecting the interpolated velocity.
inline void apply_marrone(SimState& s, const std::vector<std::uint32_t>& ghosts,
                          std::uint8_t mask, bool noslip_from_slip, const Interface& iface,
                          const std::vector<double>& velx, const std::vector<double>& vely) {
  auto& ps = s.ps();
  const KernelSpec kern(ps.h);
  long empty = 0;
#pragma omp parallel
  {
    std::vector<std::uint32_t> js;
    js.reserve(64);
#pragma omp for schedule(static) reduction(+ : empty)
    for (long long k = 0; k < (long long)ghosts.size(); ++k) {
      const std::uint32_t g = ghosts[k];
      const Vec2 v = iface.reflect(ps.pos[g]);
      fluid_near(s, v, js);
      const auto fit = mls_point<4>(v, js, ps.pos, ps.vol,
                                    {&velx, &vely, &ps.p, &ps.rho}, kern);
      if (fit[0].empty) {
        ++empty;  // keep previous ghost state
        continue;
      }
      const Vec2 uv{fit[0].value, fit[1].value};
      const Vec2 n = ps.normal[g];
      if (mask & cond_mask::kPressure) {
        ps.p[g] = fit[2].value;
        ps.rho[g] = fit[3].value;
      }
      if (mask & cond_mask::kSlip) s.vel_slip[g] = reflect_velocity(uv, n);
      if (mask & cond_mask::kNoslip)
        s.vel_noslip[g] = noslip_from_slip ? reflect_velocity(uv, n) : -1.0 * uv;
    }
  }
  s.diag.empty_supports += empty;
}

// adami_generalized_2012: Shepard average of the fluid neighbours at the
// ghost position itself; density follows from the pressure via the EOS.
// All properties, velocity included, are plain zeroth-order extrapolations:
// no sign flip or reflection is applied for either wall condition.
inline void apply_adami(SimState& s, const std::vector<std::uint32_t>& ghosts,
                        std::uint8_t mask) {
  auto& ps = s.ps();
  const KernelSpec kern(ps.h);
  long empty = 0;
#pragma omp parallel for schedule(static) reduction(+ : empty)
  for (long long k = 0; k < (long long)ghosts.size(); ++k) {
    const std::uint32_t g = ghosts[k];
    double wsum = 0.0, psum = 0.0;
    Vec2 usum{};
    for (const auto* j = s.nl.begin(g); j != s.nl.end(g); ++j) {
      if (!s.is_fluid_like(*j)) continue;
      const double w = kern.value(norm(ps.pos[g] - ps.pos[*j]));
      wsum += w;
      psum += w * ps.p[*j];
      usum += w * ps.vel[*j];
    }
    if (wsum <= 0.0) {
      ++empty;  // keep previous ghost state
      continue;
    }
    const double pbar = psum / wsum;
    const Vec2 ubar = (1.0 / wsum) * usum;
    if (mask & cond_mask::kPressure) {
      ps.p[g] = pbar;
      ps.rho[g] = s.cfg.eos.density(pbar);
    }
    if (mask & cond_mask::kSlip) s.vel_slip[g] = ubar;
    if (mask & cond_mask::kNoslip) s.vel_noslip[g] = ubar;
  }
  s.diag.empty_supports += empty;
}

// colagrossi_numerical_2003: ghosts are per-step mirror images of near-wall
// fluid particles; each stage they copy their source particle's pressure and
// density as-is while the velocity is carried with the opposite sign,
// whichever wall condition is being imposed.
inline void apply_colagrossi(SimState& s, std::uint8_t mask) {
  auto& ps = s.ps();
#pragma omp parallel for schedule(static)
  for (long long m = (long long)s.mirror_begin; m < (long long)ps.size(); ++m) {
    const std::uint32_t src = s.mirror_src[m - s.mirror_begin];
    if (mask & cond_mask::kPressure) {
      ps.p[m] = ps.p[src];
      ps.rho[m] = ps.rho[src];
    }
    const Vec2 neg = -1.0 * ps.vel[src];
    if (mask & cond_mask::kSlip) s.vel_slip[m] = neg;
    if (mask & cond_mask::kNoslip) s.vel_noslip[m] = neg;
  }
}

// takeda_numerical_1994: no-slip only. The ghost velocity opposes the nearest
// fluid particle found in a 30-degree cone about the wall normal, scaled by
// the ratio of the normal distances.
inline void apply_takeda(SimState& s, const std::vector<std::uint32_t>& ghosts,
                         const Interface& iface) {
  auto& ps = s.ps();
  constexpr double kCos30 = 0.86602540378443865;
  long empty = 0, degenerate = 0;
#pragma omp parallel for schedule(static) reduction(+ : empty, degenerate)
  for (long long k = 0; k < (long long)ghosts.size(); ++k) {
    const std::uint32_t g = ghosts[k];
    const Vec2 xo = iface.project(ps.pos[g]);
    const Vec2 n = ps.normal[g];
    const double dg = norm(ps.pos[g] - xo);
    std::uint32_t best = UINT32_MAX, nearest = UINT32_MAX;
    double best_r2 = 1e300, near_r2 = 1e300;
    for (const auto* j = s.nl.begin(g); j != s.nl.end(g); ++j) {
      if (!s.is_fluid_like(*j)) continue;
      const Vec2 d = ps.pos[*j] - xo;
      const double r2 = norm2(d);
      if (r2 < near_r2) {
        near_r2 = r2;
        nearest = *j;
      }
      const double dn = dot(d, n);
      if (dn <= 0.0 || dn * dn < kCos30 * kCos30 * r2) continue;
      if (r2 < best_r2) {
        best_r2 = r2;
        best = *j;
      }
    }
    if (best == UINT32_MAX) best = nearest;  // no cone hit: nearest fluid
    if (best == UINT32_MAX) {
      ++empty;  // keep previous ghost state
      continue;
    }
    const double di = dot(ps.pos[best] - xo, n);
    if (di < 1e-6 * s.dom.dx) {
      ++degenerate;  // keep previous ghost state
      continue;
    }
    s.vel_noslip[g] = -(dg / di) * ps.vel[best];
  }
  s.diag.empty_supports += empty;
  s.diag.degenerate_pairs += degenerate;
}

// randles_smoothed_1996: no-slip only. Ghosts carry the wall velocity, and
// fluid particles within 1.5 dx of the wall are overwritten each stage with a
// normalized interpolation between the wall value and the interior fluid.
inline void apply_randles(SimState& s, const std::vector<std::uint32_t>& ghosts,
                          const Interface& iface) {
  auto& ps = s.ps();
  const KernelSpec kern(ps.h);
  for (const std::uint32_t g : ghosts) s.vel_noslip[g] = Vec2{};
  const double band = 1.5 * s.dom.dx;
  const auto in_band = [&](std::uint32_t j) {
    return iface.signed_dist(ps.pos[j]) < band;
  };
  long empty = 0;
#pragma omp parallel for schedule(static) reduction(+ : empty)
  for (long long i = 0; i < (long long)ps.size(); ++i) {
    if (!s.is_fluid_like(i) || !in_band(std::uint32_t(i))) continue;
    Vec2 num{};
    double bsum = 0.0;
    for (const auto* j = s.nl.begin(i); j != s.nl.end(i); ++j) {
      const double w = kern.value(norm(ps.pos[i] - ps.pos[*j])) * ps.vol[*j];
      if (ps.tag[*j] == Tag::Solid) {
        bsum += w;
      } else if (s.is_fluid_like(*j) && !in_band(*j)) {
        num += w * ps.vel[*j];
      }
    }
    const double den = 1.0 - bsum;
    if (den <= 1e-12) {
      ++empty;  // keep current velocity
      continue;
    }
    ps.vel[i] = (1.0 / den) * num;
  }
  s.diag.empty_supports += empty;
}

// hashemi_modified_2012: single on-surface layer. Ghosts move with the wall;
// their pressure solves the discrete normal momentum balance of the (static)
// wall: grad p . n / rho = (-a_wall + nu lap u + g + src) . n with a_wall = 0.
// The viscous term is the previous step's discrete value interpolated from
// the fluid; the source term is evaluated in place.
inline void apply_hashemi(SimState& s, const std::vector<std::uint32_t>& ghosts,
                          std::uint8_t mask, double t) {
  auto& ps = s.ps();
  const KernelSpec kern(ps.h);
  const int surf = ghosts.empty() ? -1 : s.dom.surface[ghosts.front()];
  const int variant = s.cfg.hash_variant;  // TODO(experiment): remove
  const bool with_own = variant & 1, with_green = variant & 2, corrected = !(variant & 4);
  const bool pin_bracket = variant & 8, pin_num = variant & 16;
  long empty = 0;
#pragma omp parallel for schedule(static) reduction(+ : empty)
  for (long long k = 0; k < (long long)ghosts.size(); ++k) {
    const std::uint32_t g = ghosts[k];
    const Vec2 n = ps.normal[g];
    if (mask & cond_mask::kNoslip) s.vel_noslip[g] = Vec2{};  // wall at rest
    if (!(mask & cond_mask::kPressure)) continue;

    // Stencil membership: fluid always; optionally same-surface ghosts
    // (previous solve's pressure) and other pinned solids.
    const auto in_stencil = [&](std::uint32_t j, double& pj) {
      if (s.is_fluid_like(j)) {
        pj = ps.p[j];
        return true;
      }
      if (ps.tag[j] != Tag::Solid) return false;
      if (s.dom.surface[j] == surf) {
        pj = s.hash_p_prev[j];
        return with_own;
      }
      pj = ps.p[j];
      return with_green;
    };

    // One-sided correction over the stencil.
    Mat2 Bg = identity2();
    if (corrected) {
      Mat2 m{};
      for (const auto* j = s.nl.begin(g); j != s.nl.end(g); ++j) {
        double pj;
        if (!in_stencil(*j, pj)) continue;
        const Vec2 dx = ps.pos[*j] - ps.pos[g];
        m += ps.vol[*j] * outer(dx, kern.grad(-dx));
      }
      if (!(std::abs(det(m)) < 1e-300 || cond2(m) > s.cfg.cond_limit)) Bg = inverse(m);
    }

    // Normal projection of sum p_j grad~W omega and sum grad~W omega over the
    // stencil, plus the Shepard average of the lagged viscous acceleration
    // (fluid-borne, so fluid neighbours only).
    double num = 0.0, den = 0.0, wsum = 0.0, vsum = 0.0;
    for (const auto* j = s.nl.begin(g); j != s.nl.end(g); ++j) {
      double pj;
      if (!in_stencil(*j, pj)) continue;
      if (pin_num) pj = ms_state(s.ms_id, ps.pos[*j], t).p;  // TODO(experiment)
      const Vec2 gw = Bg * kern.grad(ps.pos[g] - ps.pos[*j]);
      num += pj * ps.vol[*j] * dot(gw, n);
      den += ps.vol[*j] * dot(gw, n);
      if (!s.is_fluid_like(*j)) continue;
      const double w = kern.value(norm(ps.pos[g] - ps.pos[*j]));
      wsum += w;
      vsum += w * dot(s.hash_visc_prev[*j], n);
    }
    if (wsum <= 0.0 || std::abs(den) < 1e-12 / ps.h) {
      ++empty;  // keep previous ghost pressure
      continue;
    }
    double bracket = vsum / wsum + dot(s.cfg.gravity, n);
    if (pin_bracket) {  // TODO(experiment): analytic viscous term instead of lagged data
      const auto& f = ms(s.ms_id);
      const Vec2 x = ps.pos[g];
      const Vec2 lap{f.u_xx(x.x, x.y, t) + f.u_yy(x.x, x.y, t),
                     f.v_xx(x.x, x.y, t) + f.v_yy(x.x, x.y, t)};
      bracket = s.cfg.nu * dot(lap, n) + dot(s.cfg.gravity, n);
    }
    if (s.ms_enabled)
      bracket += dot(ms_residues(s.ms_id, ps.pos[g], t, s.cfg.eos, s.cfg.nu).mom, n);
    const double pg = (num - ps.rho[g] * bracket) / den;
    ps.p[g] = pg;
    ps.rho[g] = s.cfg.eos.density(pg);
  }
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < (long long)ghosts.size(); ++k)
    s.hash_p_prev[ghosts[k]] = ps.p[ghosts[k]];
  s.diag.empty_supports += empty;
}

// marongiu_free_2010: single on-surface layer whose density integrates a
// characteristic relation along the inward normal; pressure follows from the
// EOS. The normal derivatives come from a one-sided five-point stencil of
// Shepard samples.
inline void apply_marongiu(SimState& s, const std::vector<std::uint32_t>& ghosts,
                           double /*t*/) {
  auto& ps = s.ps();
  const KernelSpec kern(ps.h);
  const double dx = s.dom.dx;
  long empty = 0;
#pragma omp parallel
  {
    std::vector<std::uint32_t> js;
    js.reserve(64);
#pragma omp for schedule(static) reduction(+ : empty)
    for (long long k = 0; k < (long long)ghosts.size(); ++k) {
      const std::uint32_t g = ghosts[k];
      const Vec2 n = ps.normal[g];
      // Current integrated boundary state.
      const double rb = s.rho_bound[g];
      ps.rho[g] = rb;
      ps.p[g] = s.cfg.eos.pressure(rb);

      double rho_s[5], un_s[5];
      bool ok = true;
      for (int q = 0; q < 5 && ok; ++q) {
        const Vec2 x = ps.pos[g] + (q * dx) * n;
        fluid_near(s, x, js);
        double wsum = 0.0, rsum = 0.0, usum = 0.0;
        for (const std::uint32_t j : js) {
          const double w = kern.value(norm(x - ps.pos[j]));
          wsum += w;
          rsum += w * ps.rho[j];
          usum += w * dot(ps.vel[j], n);
        }
        if (wsum <= 0.0) {
          ok = false;
          break;
        }
        rho_s[q] = rsum / wsum;
        un_s[q] = usum / wsum;
      }
      if (!ok) {
        ++empty;
        s.k_drho_bound[g] = 0.0;
        continue;
      }
      const auto d1 = [&](const double* f) {
        return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) /
               (12.0 * dx);
      };
      s.k_drho_bound[g] = s.cfg.eos.c_o * d1(rho_s) - rb * d1(un_s) -
                          rb * dot(s.cfg.gravity, n) / s.cfg.eos.c_o;
    }
  }
  s.diag.empty_supports += empty;
}

}  // namespace bc_detail

// Rebuild the Colagrossi mirror set: one mirror per fluid particle within
// kernel support of the test interface. Call once per step, before the state
// snapshot, so particle count stays fixed across the two stages.
inline void rebuild_mirrors(SimState& s) {
  auto& ps = s.ps();
  s.dom.truncate(s.mirror_begin);
  s.mirror_src.clear();
  const Interface& iface = s.dom.interfaces[s.dom.test_interface];
  const double cut = 3.0 * ps.h;
  const std::size_t n = ps.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (ps.tag[i] != Tag::Fluid) continue;
    if (iface.signed_dist(ps.pos[i]) >= cut) continue;
    const std::size_t m =
        s.dom.append_particle(iface.reflect(ps.pos[i]), Tag::Solid, s.dom.test_interface,
                              /*green=*/false);
    s.mirror_src.push_back(std::uint32_t(i));
    ps.vel[m] = ps.vel[i];
    ps.rho[m] = ps.rho[i];
    ps.p[m] = ps.p[i];
  }
}

// Fill ghost state for every solid particle at stage time t. Order: pin all
// solids to the manufactured state (verification runs), then let each
// surface's treatment overwrite the property groups it owns.
inline void apply_solid_bc(SimState& s, double t) {
  auto& ps = s.ps();
  const std::size_t n = ps.size();

  if (s.ms_enabled) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < (long long)n; ++i) {
      if (ps.tag[i] != Tag::Solid) continue;
      const MsState st = ms_state(s.ms_id, ps.pos[i], t);
      ps.p[i] = st.p;
      ps.rho[i] = s.cfg.eos.density(st.p);
      s.vel_slip[i] = st.vel;
      s.vel_noslip[i] = st.vel;
    }
  }

  // Component scratch for point interpolation.
  s.velx.resize(n);
  s.vely.resize(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i) {
    s.velx[i] = ps.vel[i].x;
    s.vely[i] = ps.vel[i].y;
  }

  for (std::size_t surf = 0; surf < s.surf_bc.size(); ++surf) {
    const SurfaceBc& bc = s.surf_bc[surf];
    if (bc.mask == 0) continue;
    if (bc.method == SolidMethod::MmsReference || bc.method == SolidMethod::MmsReference2L)
      continue;  // manufactured pin already applied
    if (bc.method == SolidMethod::Colagrossi) {
      bc_detail::apply_colagrossi(s, bc.mask);
      continue;
    }
    std::vector<std::uint32_t> ghosts;
    for (std::size_t i = 0; i < n; ++i)
      if (ps.tag[i] == Tag::Solid && s.dom.surface[i] == int(surf)) ghosts.push_back(std::uint32_t(i));
    const Interface& iface = s.dom.interfaces[surf];
    switch (bc.method) {
      case SolidMethod::Marrone:
        bc_detail::apply_marrone(s, ghosts, bc.mask, bc.noslip_from_slip, iface, s.velx, s.vely);
        break;
      case SolidMethod::Adami:
        bc_detail::apply_adami(s, ghosts, bc.mask);
        break;
      case SolidMethod::Takeda:
        bc_detail::apply_takeda(s, ghosts, iface);
        break;
      case SolidMethod::Randles:
        bc_detail::apply_randles(s, ghosts, iface);
        break;
      case SolidMethod::Hashemi:
        bc_detail::apply_hashemi(s, ghosts, bc.mask, t);
        break;
      case SolidMethod::Marongiu:
        bc_detail::apply_marongiu(s, ghosts, t);
        break;
      default:
        break;
    }
  }

#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i)
    if (ps.tag[i] == Tag::Solid) ps.vel[i] = s.vel_noslip[i];
}

}  // namespace wcsph
