#pragma once

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "wcsph/eos.hpp"
#include "wcsph/vec.hpp"

namespace wcsph {

enum class MsId {
  PresNumD1,
  PresNumD5,
  SlipD1,
  SlipD5,
  NoslipD1,
  NoslipD5,
  NoslipD6,
  IoVel,
  InVelWave,
  OutVelWave,
  IoPres,
  InPresWave,
  OutPresWave,
  Count,
};

using MsFn = double (*)(double, double, double);

// One manufactured solution: fields u, v, p and the space/time derivatives
// needed to assemble continuity and momentum residues.
struct MsFuncs {
  const char* name;
  MsFn u, v, p;
  MsFn u_x, u_y, u_t;
  MsFn v_x, v_y, v_t;
  MsFn p_x, p_y, p_t;
  MsFn u_xx, u_yy, v_xx, v_yy;
  MsFn p_xx, p_yy;
};

namespace ms_detail {
#include "wcsph/ms_catalog.inc"
}  // namespace ms_detail

inline const MsFuncs& ms(MsId id) { return ms_detail::kMsTable[static_cast<int>(id)]; }

inline const char* to_string(MsId id) { return ms(id).name; }

inline MsId ms_from_string(const std::string& s) {
  for (int i = 0; i < static_cast<int>(MsId::Count); ++i)
    if (s == ms_detail::kMsTable[i].name) return static_cast<MsId>(i);
  throw std::invalid_argument("unknown manufactured solution id: " + s);
}

struct MsState {
  Vec2 vel;
  double p;
};

inline MsState ms_state(MsId id, Vec2 x, double t) {
  const MsFuncs& f = ms(id);
  return {{f.u(x.x, x.y, t), f.v(x.x, x.y, t)}, f.p(x.x, x.y, t)};
}

struct MsResidues {
  double cont;
  Vec2 mom;
};

// Residues of the manufactured fields under the governing equations, with
// density tied to pressure through the EOS:
//   R_cont = D rho/Dt + rho div u
//   R_mom  = D u/Dt + grad p / rho - nu lap u
// Added as sources, they make the manufactured solution an exact solution.
inline MsResidues ms_residues(MsId id, Vec2 pos, double t, const Eos& eos, double nu) {
  const MsFuncs& f = ms(id);
  const double x = pos.x, y = pos.y;
  const double u = f.u(x, y, t), v = f.v(x, y, t), p = f.p(x, y, t);
  const double ux = f.u_x(x, y, t), uy = f.u_y(x, y, t), ut = f.u_t(x, y, t);
  const double vx = f.v_x(x, y, t), vy = f.v_y(x, y, t), vt = f.v_t(x, y, t);
  const double px = f.p_x(x, y, t), py = f.p_y(x, y, t), pt = f.p_t(x, y, t);
  const double c2 = eos.c_o * eos.c_o;
  const double rho = eos.density(p);
  MsResidues r;
  r.cont = (pt + u * px + v * py) / c2 + rho * (ux + vy);
  r.mom.x = ut + u * ux + v * uy + px / rho - nu * (f.u_xx(x, y, t) + f.u_yy(x, y, t));
  r.mom.y = vt + u * vx + v * vy + py / rho - nu * (f.v_xx(x, y, t) + f.v_yy(x, y, t));
  return r;
}

}  // namespace wcsph
