#pragma once

// Convergence-study harness: builds a simulation for one verification case
// (wall treatment + condition + domain, or open-boundary treatment + case),
// integrates it under manufactured-solution forcing, measures L1 errors
// against the manufactured fields at five save instants, and fits observed
// convergence orders across a resolution ladder.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "wcsph/scheme.hpp"

namespace wcsph {

struct CaseSpec {
  bool io = false;
  // Wall case.
  Shape shape = Shape::Straight;
  SolidMethod method = SolidMethod::MmsReference;
  Condition condition = Condition::Pressure;
  // Open-boundary case.
  OpenMethod io_method = OpenMethod::DoNothing;
  std::string io_case;  // vel-in, pres-out, vel-wave-in, ...
  int io_side = 1;      // 0 = inlet under test, 1 = outlet under test

  MsId ms = MsId::PresNumD1;
  int steps = 100;
  double c_o = 20.0;
  // Diffusion stabilizers. Single-layer wall treatments need one: the
  // truncated kernel support next to a bare surface row feeds an acoustic
  // wall mode (velocity toward the deficit reads as expansion, the resulting
  // tension pulls further toward it) growing at a rate proportional to
  // c_o/h, and grid-scale diffusion is the matching-scale damper. The
  // manufactured residue compensates the continuum value of each term, so
  // the manufactured state stays stationary.
  double delta_sph = 0.0;
  double art_alpha = 0.0;
  std::string name;
};

inline MsId solid_case_ms(Shape shape, Condition c) {
  const bool straight = shape == Shape::Straight;
  switch (c) {
    case Condition::Pressure:
      return straight ? MsId::PresNumD1 : MsId::PresNumD5;
    case Condition::Slip:
      return straight ? MsId::SlipD1 : MsId::SlipD5;
    default:
      if (straight) return MsId::NoslipD1;
      return (shape == Shape::Convex || shape == Shape::PackedConvex) ? MsId::NoslipD5
                                                                      : MsId::NoslipD6;
  }
}

inline CaseSpec make_solid_case(Shape shape, SolidMethod method, Condition cond) {
  if (shape == Shape::IoChannel)
    throw std::invalid_argument("wall cases need a wall-test domain");
  if (!(supported_conditions(method) & condition_bit(cond)))
    throw std::invalid_argument("treatment '" + to_string(method) +
                                "' does not support condition '" + to_string(cond) + "'");
  CaseSpec spec;
  spec.shape = shape;
  spec.method = method;
  spec.condition = cond;
  spec.ms = solid_case_ms(shape, cond);
  if (surface_spec(method).layers == 1) spec.art_alpha = 0.1;
  spec.name = std::string(to_string(shape)) + "/" + to_string(method) + "/" + to_string(cond);
  return spec;
}

inline CaseSpec make_io_case(OpenMethod method, const std::string& io_case) {
  struct Row {
    const char* name;
    MsId ms;
    int side;
    bool wave;
  };
  static constexpr Row rows[] = {
      {"vel-in", MsId::IoVel, 0, false},        {"pres-in", MsId::IoPres, 0, false},
      {"vel-wave-in", MsId::InVelWave, 0, true}, {"pres-wave-in", MsId::InPresWave, 0, true},
      {"vel-out", MsId::IoVel, 1, false},       {"pres-out", MsId::IoPres, 1, false},
      {"vel-wave-out", MsId::OutVelWave, 1, true},
      {"pres-wave-out", MsId::OutPresWave, 1, true},
  };
  const Row* row = nullptr;
  for (const Row& r : rows)
    if (io_case == r.name) row = &r;
  if (!row) throw std::invalid_argument("unknown io case: " + io_case);
  if (method == OpenMethod::DoNothing && row->side != 1)
    throw std::invalid_argument("donothing is an outflow treatment; use an -out case");
  CaseSpec spec;
  spec.io = true;
  spec.io_method = method;
  spec.io_case = io_case;
  spec.io_side = row->side;
  spec.ms = row->ms;
  spec.steps = row->wave ? 500 : 100;
  spec.c_o = row->wave ? 40.0 : 20.0;
  spec.name = "io/" + to_string(method) + "/" + io_case;
  return spec;
}

inline SimState make_sim(const CaseSpec& spec, double dx, double dt) {
  DomainConfig dc;
  dc.shape = spec.io ? Shape::IoChannel : spec.shape;
  dc.dx = dx;
  dc.test = spec.io ? TestSurfaceSpec{6, false} : surface_spec(spec.method);

  SimState s;
  s.dom = generate_domain(dc);
  s.cfg.eos = Eos{spec.c_o, 1.0, 0.0};
  s.cfg.nu = 0.01;
  s.cfg.dt = dt;
  s.cfg.shift_every = 10;
  s.cfg.delta_sph = spec.delta_sph;
  s.cfg.art_alpha = spec.art_alpha;
  s.ms_id = spec.ms;
  s.ms_enabled = true;
  s.surf_bc.assign(s.dom.interfaces.size(), SurfaceBc{});
  if (spec.io) {
    s.io_method = spec.io_method;
    s.io_test_side = spec.io_side;
  } else {
    s.surf_bc[0] = SurfaceBc{spec.method, condition_bit(spec.condition), false};
  }

  const std::size_t n = s.ps().size();
  for (std::size_t i = 0; i < n; ++i) pin_to_ms(s, i, 0.0);
  s.rho_bound.assign(n, s.cfg.eos.rho_o);
  for (std::size_t i = 0; i < n; ++i)
    if (s.ps().tag[i] == Tag::Solid) s.rho_bound[i] = s.ps().rho[i];
  s.hash_visc_prev.assign(n, Vec2{});
  s.hash_p_prev.assign(s.ps().p.begin(), s.ps().p.end());
  s.mirror_begin = n;
  return s;
}

struct RunResult {
  double dx = 0.0;
  double L1_u = 0.0, L1_p = 0.0, L1_rho = 0.0;  // summed over 5 save instants
  long fluid_count = 0;
  bool failed = false;
  std::string error;
  Diagnostics diag;
  double seconds = 0.0;
};

namespace harness_detail {

inline void accumulate_l1(const SimState& s, RunResult& r) {
  const auto& ps = s.ps();
  double eu = 0.0, ep = 0.0, erho = 0.0;
  long cnt = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.tag[i] != Tag::Fluid) continue;
    const MsState st = ms_state(s.ms_id, ps.pos[i], s.t);
    eu += std::abs(ps.vel[i].x - st.vel.x) + std::abs(ps.vel[i].y - st.vel.y);
    ep += std::abs(ps.p[i] - st.p);
    erho += std::abs(ps.rho[i] - s.cfg.eos.density(st.p));
    ++cnt;
  }
  if (cnt == 0) return;
  r.L1_u += eu / double(cnt);
  r.L1_p += ep / double(cnt);
  r.L1_rho += erho / double(cnt);
  r.fluid_count = cnt;
}

}  // namespace harness_detail

inline RunResult run_ms_case(const CaseSpec& spec, double dx, double dt) {
  RunResult r;
  r.dx = dx;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    SimState s = make_sim(spec, dx, dt);
    const int interval = std::max(1, spec.steps / 5);
    for (int k = 1; k <= spec.steps; ++k) {
      step(s);
      if (k % interval == 0) harness_detail::accumulate_l1(s, r);
    }
    r.diag = s.diag;
  } catch (const std::exception& e) {
    r.failed = true;
    r.error = e.what();
    r.L1_u = r.L1_p = r.L1_rho = std::numeric_limits<double>::quiet_NaN();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Least-squares slope of log(L1) against log(dx); NaN when any sample is
// unusable (failed run, zero error).
inline double fit_order(const std::vector<double>& dxs, const std::vector<double>& l1) {
  const std::size_t n = dxs.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(l1[i] > 0.0) || !std::isfinite(l1[i])) return std::numeric_limits<double>::quiet_NaN();
    const double x = std::log(dxs[i]), y = std::log(l1[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

struct StudyResult {
  CaseSpec spec;
  double dt = 0.0;
  std::vector<RunResult> runs;
  double order_u = std::numeric_limits<double>::quiet_NaN();
  double order_p = std::numeric_limits<double>::quiet_NaN();
  double order_rho = std::numeric_limits<double>::quiet_NaN();
  std::string focus;  // property the case is judged on: "u" or "p"

  double focus_order() const { return focus == "p" ? order_p : order_u; }
  double finest_focus_l1() const {
    if (runs.empty()) return std::numeric_limits<double>::quiet_NaN();
    const RunResult& r = runs.back();
    return focus == "p" ? r.L1_p : r.L1_u;
  }
};

// Time step shared by the whole ladder, set by its finest resolution.
inline double ladder_dt(const std::vector<double>& dxs, double c_o, double u_scale = 1.0) {
  double dmin = dxs.front();
  for (double d : dxs) dmin = std::min(dmin, d);
  return 1.2 * dmin / (c_o + u_scale);
}

inline StudyResult run_study(const CaseSpec& spec, std::vector<double> dxs) {
  std::sort(dxs.begin(), dxs.end(), std::greater<>());  // coarse to fine
  StudyResult out;
  out.spec = spec;
  out.dt = ladder_dt(dxs, spec.c_o);
  const bool pres_case =
      spec.io ? spec.io_case.rfind("pres", 0) == 0 : spec.condition == Condition::Pressure;
  out.focus = pres_case ? "p" : "u";
  std::vector<double> l1u, l1p, l1rho, ds;
  for (double dx : dxs) {
    out.runs.push_back(run_ms_case(spec, dx, out.dt));
    const RunResult& r = out.runs.back();
    ds.push_back(dx);
    l1u.push_back(r.L1_u);
    l1p.push_back(r.L1_p);
    l1rho.push_back(r.L1_rho);
  }
  out.order_u = fit_order(ds, l1u);
  out.order_p = fit_order(ds, l1p);
  out.order_rho = fit_order(ds, l1rho);
  return out;
}

// Interior-margin operator study on a ghost-free lattice: measures how the
// corrected gradient and the two-pass Laplacian converge when boundary-band
// particles are included (n_skip = 0) or when n_skip particle rows are
// excluded per side (errors averaged over the inner (1 - 2 n dx)^2 box).
// The smooth test fields exercise both directions.
struct LayerTestResult {
  std::vector<double> dxs;
  std::vector<double> grad_all, grad_skip, lap_all, lap_skip;
  double order_grad_all = 0, order_grad_skip = 0;
  double order_lap_all = 0, order_lap_skip = 0;
};

inline LayerTestResult layer_skip_test(std::vector<double> dxs = {1.0 / 50, 1.0 / 100,
                                                                  1.0 / 200},
                                       int n_skip = 2) {
  std::sort(dxs.begin(), dxs.end(), std::greater<>());
  LayerTestResult out;
  out.dxs = dxs;
  constexpr double k4 = 4.0 * M_PI;
  for (const double dx : dxs) {
    ParticleSet ps = lattice_square(dx);
    const NeighborLists nl = build_neighbors(ps.pos, 3.0 * ps.h);
    compute_volumes(ps, nl);
    std::vector<Mat2> B;
    compute_corrections(ps, nl, B);

    const std::size_t n = ps.size();
    std::vector<double> p(n);
    std::vector<Vec2> u(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 x = ps.pos[i];
      p[i] = std::sin(k4 * x.x) + std::sin(k4 * x.y);
      u[i] = {std::sin(k4 * (x.x + x.y)), std::cos(k4 * (x.x + x.y))};
    }
    const std::vector<Vec2> grad_p = corrected_gradient(ps, nl, B, p);
    const std::vector<Mat2> grad_u = velocity_gradient(ps, nl, B, u);
    const std::vector<Vec2> lap_u = divergence_of_gradient(ps, nl, B, grad_u);

    const double m = n_skip * dx;
    double eg_all = 0, eg_skip = 0, el_all = 0, el_skip = 0;
    long c_all = 0, c_skip = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 x = ps.pos[i];
      const Vec2 gp_exact{k4 * std::cos(k4 * x.x), k4 * std::cos(k4 * x.y)};
      const double lap_s = -2.0 * k4 * k4;
      const Vec2 lap_exact{lap_s * std::sin(k4 * (x.x + x.y)),
                           lap_s * std::cos(k4 * (x.x + x.y))};
      const double eg = std::abs(grad_p[i].x - gp_exact.x) + std::abs(grad_p[i].y - gp_exact.y);
      const double el = std::abs(lap_u[i].x - lap_exact.x) + std::abs(lap_u[i].y - lap_exact.y);
      eg_all += eg;
      el_all += el;
      ++c_all;
      if (std::min({x.x, x.y, 1.0 - x.x, 1.0 - x.y}) > m) {
        eg_skip += eg;
        el_skip += el;
        ++c_skip;
      }
    }
    out.grad_all.push_back(eg_all / double(c_all));
    out.lap_all.push_back(el_all / double(c_all));
    out.grad_skip.push_back(c_skip ? eg_skip / double(c_skip) : 0.0);
    out.lap_skip.push_back(c_skip ? el_skip / double(c_skip) : 0.0);
  }
  out.order_grad_all = fit_order(out.dxs, out.grad_all);
  out.order_grad_skip = fit_order(out.dxs, out.grad_skip);
  out.order_lap_all = fit_order(out.dxs, out.lap_all);
  out.order_lap_skip = fit_order(out.dxs, out.lap_skip);
  return out;
}

}  // namespace wcsph
