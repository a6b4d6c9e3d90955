#include <gtest/gtest.h>

#include <cmath>

#include "wcsph/scheme.hpp"

namespace wcsph {
namespace {

// Single particle under constant body force: the midpoint scheme must land
// exactly on u_N = u0 + a N dt and x advances with the stage velocity,
// x_N = x0 + N u0 dt + a dt^2 N^2 / 2.
TEST(Scheme, MidpointConstantAccelerationIsExact) {
  SimState s;
  s.dom.dx = 0.1;
  s.dom.ps.h = 0.12;
  s.dom.append_particle({0.4, 0.7}, Tag::Fluid, -1, false);
  s.ms_enabled = false;
  s.cfg.dt = 0.01;
  s.cfg.shift_every = 0;
  s.cfg.gravity = {0.3, -0.5};
  s.ps().vel[0] = {0.2, -0.1};

  const int N = 7;
  for (int k = 0; k < N; ++k) step(s);

  const double T = N * s.cfg.dt;
  const Vec2 u_exact = Vec2{0.2, -0.1} + T * s.cfg.gravity;
  const Vec2 x_exact = Vec2{0.4, 0.7} + T * Vec2{0.2, -0.1} +
                       (0.5 * T * N * s.cfg.dt) * s.cfg.gravity;
  EXPECT_NEAR(s.ps().vel[0].x, u_exact.x, 1e-15);
  EXPECT_NEAR(s.ps().vel[0].y, u_exact.y, 1e-15);
  EXPECT_NEAR(s.ps().pos[0].x, x_exact.x, 1e-15);
  EXPECT_NEAR(s.ps().pos[0].y, x_exact.y, 1e-15);
  EXPECT_DOUBLE_EQ(s.ps().rho[0], 1.0);
}

SimState quiescent_straight(double dx) {
  SimState s;
  DomainConfig cfg;
  cfg.shape = Shape::Straight;
  cfg.dx = dx;
  cfg.test = {6, false};
  s.dom = generate_domain(cfg);
  s.surf_bc.assign(s.dom.interfaces.size(), SurfaceBc{});
  s.ms_enabled = false;
  s.cfg.dt = 1.2 * dx / 21.0;
  return s;
}

// Zero velocity, uniform density, zero pressure: an exact discrete
// equilibrium. Every term in both equations vanishes identically, so the
// state must be bit-exact after stepping, shifting included.
TEST(Scheme, QuiescentStateIsExactEquilibrium) {
  SimState s = quiescent_straight(1.0 / 20);
  s.cfg.shift_every = 2;
  for (int k = 0; k < 6; ++k) step(s);
  for (std::size_t i = 0; i < s.ps().size(); ++i) {
    if (s.ps().tag[i] != Tag::Fluid) continue;
    EXPECT_DOUBLE_EQ(s.ps().rho[i], 1.0);
    EXPECT_DOUBLE_EQ(s.ps().vel[i].x, 0.0);
    EXPECT_DOUBLE_EQ(s.ps().vel[i].y, 0.0);
    EXPECT_DOUBLE_EQ(s.ps().p[i], 0.0);
  }
}

// Density diffusion must not disturb a uniform density field.
TEST(Scheme, DensityDiffusionVanishesOnUniformDensity) {
  SimState s = quiescent_straight(1.0 / 20);
  s.cfg.shift_every = 0;
  s.cfg.delta_sph = 0.0625;
  for (int k = 0; k < 4; ++k) step(s);
  for (std::size_t i = 0; i < s.ps().size(); ++i) {
    if (s.ps().tag[i] == Tag::Fluid) {
      EXPECT_DOUBLE_EQ(s.ps().rho[i], 1.0);
    }
  }
}

// Shifting a perturbed lattice must reduce the number-density imbalance at
// the perturbed particle and keep everyone inside the fluid region.
TEST(Scheme, ShiftRegularizesPerturbedLattice) {
  SimState s = quiescent_straight(1.0 / 20);
  // Perturb an interior particle (position (0.525, 0.525) sits mid-domain).
  std::size_t pick = SIZE_MAX;
  for (std::size_t i = 0; i < s.ps().size(); ++i)
    if (s.ps().tag[i] == Tag::Fluid && norm(s.ps().pos[i] - Vec2{0.525, 0.525}) < 1e-12)
      pick = i;
  ASSERT_NE(pick, SIZE_MAX);
  s.ps().pos[pick] += Vec2{0.3 / 20, 0.1 / 20};

  const KernelSpec kern(s.ps().h);
  const auto imbalance = [&](std::size_t i) {
    auto nl = build_neighbors(s.ps().pos, 3.0 * s.ps().h);
    compute_volumes(s.ps(), nl);
    Vec2 g{};
    for (const auto* j = nl.begin(i); j != nl.end(i); ++j)
      g += s.ps().vol[*j] * kern.grad(s.ps().pos[i] - s.ps().pos[*j]);
    return norm(g);
  };

  const double before = imbalance(pick);
  ipst_shift(s);
  const double after = imbalance(pick);
  EXPECT_LT(after, 0.35 * before);
  for (std::size_t i = 0; i < s.ps().size(); ++i) {
    if (s.ps().tag[i] == Tag::Fluid) {
      EXPECT_TRUE(s.dom.in_fluid_region(s.ps().pos[i]));
    }
  }
}

}  // namespace
}  // namespace wcsph
