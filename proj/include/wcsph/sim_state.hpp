#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wcsph/eos.hpp"
#include "wcsph/geometry.hpp"
#include "wcsph/ms.hpp"
#include "wcsph/neighbors.hpp"
#include "wcsph/particles.hpp"
#include "wcsph/vec.hpp"

namespace wcsph {

enum class SolidMethod : std::uint8_t {
  Marrone,
  Adami,
  Colagrossi,
  Takeda,
  Randles,
  Hashemi,
  Marongiu,
  MmsReference,
  MmsReference2L,
};

enum class Condition : std::uint8_t { Pressure, Slip, Noslip };

// Property groups a wall treatment feeds to its ghosts.
namespace cond_mask {
inline constexpr std::uint8_t kPressure = 1;  // p and rho
inline constexpr std::uint8_t kSlip = 2;      // free-slip ghost velocity
inline constexpr std::uint8_t kNoslip = 4;    // no-slip ghost velocity
inline constexpr std::uint8_t kAll = 7;
}  // namespace cond_mask

inline std::uint8_t condition_bit(Condition c) {
  switch (c) {
    case Condition::Pressure: return cond_mask::kPressure;
    case Condition::Slip: return cond_mask::kSlip;
    default: return cond_mask::kNoslip;
  }
}

inline std::uint8_t supported_conditions(SolidMethod m) {
  switch (m) {
    case SolidMethod::Marrone:
    case SolidMethod::Adami:
    case SolidMethod::Colagrossi:
    case SolidMethod::MmsReference:
    case SolidMethod::MmsReference2L:
      return cond_mask::kAll;
    case SolidMethod::Takeda:
    case SolidMethod::Randles:
      return cond_mask::kNoslip;
    case SolidMethod::Hashemi:
      return cond_mask::kPressure | cond_mask::kNoslip;
    case SolidMethod::Marongiu:
      return cond_mask::kPressure;
  }
  return 0;
}

// Ghost layout each treatment expects on the surface it handles.
inline TestSurfaceSpec surface_spec(SolidMethod m) {
  switch (m) {
    case SolidMethod::Hashemi:
    case SolidMethod::Marongiu:
      return {1, true};
    case SolidMethod::MmsReference2L:
      return {2, false};
    case SolidMethod::Colagrossi:
      return {0, false};  // builds its own mirror particles
    default:
      return {6, false};
  }
}

inline SolidMethod solid_method_from_string(const std::string& s) {
  if (s == "marrone") return SolidMethod::Marrone;
  if (s == "adami") return SolidMethod::Adami;
  if (s == "colagrossi") return SolidMethod::Colagrossi;
  if (s == "takeda") return SolidMethod::Takeda;
  if (s == "randles") return SolidMethod::Randles;
  if (s == "hashemi") return SolidMethod::Hashemi;
  if (s == "marongiu") return SolidMethod::Marongiu;
  if (s == "mms") return SolidMethod::MmsReference;
  if (s == "mms2l") return SolidMethod::MmsReference2L;
  throw std::invalid_argument("unknown solid method: " + s);
}

inline std::string to_string(SolidMethod m) {
  switch (m) {
    case SolidMethod::Marrone: return "marrone";
    case SolidMethod::Adami: return "adami";
    case SolidMethod::Colagrossi: return "colagrossi";
    case SolidMethod::Takeda: return "takeda";
    case SolidMethod::Randles: return "randles";
    case SolidMethod::Hashemi: return "hashemi";
    case SolidMethod::Marongiu: return "marongiu";
    case SolidMethod::MmsReference: return "mms";
    case SolidMethod::MmsReference2L: return "mms2l";
  }
  return "?";
}

inline Condition condition_from_string(const std::string& s) {
  if (s == "pressure") return Condition::Pressure;
  if (s == "slip") return Condition::Slip;
  if (s == "noslip") return Condition::Noslip;
  throw std::invalid_argument("unknown condition: " + s);
}

inline std::string to_string(Condition c) {
  switch (c) {
    case Condition::Pressure: return "pressure";
    case Condition::Slip: return "slip";
    default: return "noslip";
  }
}

enum class OpenMethod : std::uint8_t { None, DoNothing, Mirror, SimpleMirror, Hybrid };

inline OpenMethod open_method_from_string(const std::string& s) {
  if (s == "donothing") return OpenMethod::DoNothing;
  if (s == "mirror") return OpenMethod::Mirror;
  if (s == "simple-mirror") return OpenMethod::SimpleMirror;
  if (s == "hybrid") return OpenMethod::Hybrid;
  throw std::invalid_argument("unknown open-boundary method: " + s);
}

inline std::string to_string(OpenMethod m) {
  switch (m) {
    case OpenMethod::None: return "none";
    case OpenMethod::DoNothing: return "donothing";
    case OpenMethod::Mirror: return "mirror";
    case OpenMethod::SimpleMirror: return "simple-mirror";
    default: return "hybrid";
  }
}

struct SchemeConfig {
  Eos eos{};               // c_o = 20, rho_o = 1, p_b = 0 by default
  double nu = 0.01;
  double dt = 0.0;
  int shift_every = 10;    // <= 0 disables particle shifting
  double delta_sph = 0.0;  // density-diffusion coefficient (0 = off)
  double art_alpha = 0.0;  // artificial velocity-diffusion coefficient (0 = off)
  double cond_limit = 1e8; // correction-matrix condition cutoff
  double pos_guard = 1e3;  // |x|,|y| beyond this aborts the run (diverged)
  int hash_variant = 0;    // TODO(experiment): Hashemi solve stencil bits, remove
  Vec2 gravity{};
};

struct Diagnostics {
  long singular_corrections = 0;  // correction matrices replaced by identity
  long empty_supports = 0;        // BC extrapolations with no fluid support
  long degenerate_pairs = 0;      // Takeda probes with vanishing normal depth
  long reverted_shifts = 0;       // shift vectors undone at a boundary
  long clamped_shifts = 0;        // shift vectors cut to the per-call cap
};

// Free-stream reference state for the characteristics-based open boundary.
struct HybridRef {
  double rho = 1.0;
  double u = 0.0;
  double v = 0.0;
  double p = 0.0;
  bool initialized = false;
};

// Boundary treatment assigned to one surface: which treatment runs, which
// property groups it overwrites, and whether velocity gradients should see
// the free-slip value (physically free-slip wall).
struct SurfaceBc {
  SolidMethod method = SolidMethod::MmsReference;
  std::uint8_t mask = 0;
  bool noslip_from_slip = false;
};

struct SimState {
  Domain dom;
  SchemeConfig cfg;

  // Per-surface wall treatments, indexed like dom.interfaces. Surfaces with
  // mask 0 only receive the manufactured pin (green ghosts).
  std::vector<SurfaceBc> surf_bc;

  // Open-boundary treatment; io_test_side picks which interface (0 = inlet,
  // 1 = outlet) uses io_method. The other side is held at the manufactured
  // state. -1 applies io_method to both sides (flow demo).
  OpenMethod io_method = OpenMethod::None;
  int io_test_side = -1;
  HybridRef refs[2];
  double ref_gate_u = 1.0;  // velocity scale for the hybrid averaging gate
  int ref_window = 50;

  // Manufactured solution driving sources, ghost pinning, and init.
  MsId ms_id = MsId::PresNumD1;
  bool ms_enabled = true;

  double t = 0.0;
  long step_count = 0;
  Diagnostics diag;

  // Integrated boundary density (Marongiu ghosts; index-aligned, fluid slots
  // unused).
  std::vector<double> rho_bound;

  // Discrete viscous acceleration (nu lap u) per fluid particle: visc_acc
  // from the current stage, hash_visc_prev from the previous step's final
  // stage (feeds the Hashemi pressure solve; zero before the first step).
  std::vector<Vec2> visc_acc;
  std::vector<Vec2> hash_visc_prev;

  // Hashemi ghost pressures from the previous solve (previous stage): lets
  // same-surface neighbours enter the next solve Jacobi-style instead of
  // reading whatever pin currently sits in ps.p. Seeded with the initial
  // pressure field.
  std::vector<double> hash_p_prev;

  // Colagrossi mirrors occupy [mirror_begin, ps.size()); mirror_src maps each
  // to the fluid particle it reflects.
  std::size_t mirror_begin = 0;
  std::vector<std::uint32_t> mirror_src;

  // Per-stage workspace (rebuilt every stage).
  NeighborLists nl;
  PointGrid grid;
  std::vector<Mat2> B;
  std::vector<Vec2> vel_slip;    // wall-velocity seen by the continuity eq.
  std::vector<Vec2> vel_noslip;  // wall-velocity seen by velocity gradients
  std::vector<Mat2> grad_u;
  std::vector<double> velx, vely;  // component scratch for point fits

  // Stage derivatives and step-start snapshot.
  std::vector<double> k_drho;
  std::vector<Vec2> k_du;
  std::vector<double> k_drho_bound;
  std::vector<Vec2> pos0, vel0;
  std::vector<double> rho0, rho_bound0;

  ParticleSet& ps() { return dom.ps; }
  const ParticleSet& ps() const { return dom.ps; }

  bool is_fluid_like(std::size_t i) const {
    const Tag tg = dom.ps.tag[i];
    return tg == Tag::Fluid || tg == Tag::Inlet || tg == Tag::Outlet;
  }
};

// Manufactured state applied to a particle: velocity from the solution,
// density consistent with the manufactured pressure through the EOS.
inline void pin_to_ms(SimState& s, std::size_t i, double t) {
  const MsState st = ms_state(s.ms_id, s.ps().pos[i], t);
  s.ps().vel[i] = st.vel;
  s.ps().p[i] = st.p;
  s.ps().rho[i] = s.cfg.eos.density(st.p);
}

}  // namespace wcsph
