#include "wcsph/ms.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

using namespace wcsph;

namespace {

// Sample box per solution: annulus ids stay off the center singular point,
// everything else uses the unit square padded by the ghost slab width.
Vec2 sample_point(MsId id, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-0.15, 1.15);
  const std::string name = to_string(id);
  if (name.find("_d5") != std::string::npos || name.find("_d6") != std::string::npos) {
    for (;;) {
      const Vec2 x{d(rng), d(rng)};
      const double r = norm(x - Vec2{0.5, 0.5});
      if (r >= 0.1 && r <= 0.62) return x;
    }
  }
  return {d(rng), d(rng)};
}

double co_for(MsId id) {
  const std::string name = to_string(id);
  return name.find("wave") != std::string::npos ? 40.0 : 20.0;
}

// 4th-order central stencils at the pinned steps (space 1e-5, time 1e-6).
double d1(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}
double d2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}

}  // namespace

TEST(Ms, IdStringsRoundTrip) {
  for (int i = 0; i < int(MsId::Count); ++i) {
    const MsId id = MsId(i);
    EXPECT_EQ(ms_from_string(to_string(id)), id);
  }
  EXPECT_THROW(ms_from_string("not_a_solution"), std::invalid_argument);
}

TEST(Ms, FrozenSpotValues) {
  // Hand-evaluated field values.
  EXPECT_NEAR(ms(MsId::PresNumD1).p(0.5, 0.5, 0.0), 1.25, 1e-12);
  EXPECT_NEAR(ms(MsId::PresNumD1).u(0.25, 0.5, 0.0), 0.5, 1e-12);
  EXPECT_NEAR(ms(MsId::NoslipD1).u(0.25, 0.5, 0.0), -0.25, 1e-12);
  EXPECT_NEAR(ms(MsId::SlipD1).u(0.25, 1.0, 0.0), 1.0, 1e-12);  // wall value = background
  // y(y-1) cos(2 pi y) + 1 at y = 0.5: (-0.25)(-1) + 1
  EXPECT_NEAR(ms(MsId::IoVel).u(0.0, 0.5, 0.0), 1.25, 1e-12);
}

TEST(Ms, PressureNeumannSolutionIsAngularOnly) {
  // pres_num_d5: p = atan2((y-c)^2, (x-c)^2) depends on the polar angle only,
  // so the radial pressure derivative vanishes identically.
  const MsFuncs& f = ms(MsId::PresNumD5);
  for (const double r : {0.25, 0.3, 0.5}) {
    for (double th = 0.05; th < 6.2; th += 0.37) {
      const double x = 0.5 + r * std::cos(th), y = 0.5 + r * std::sin(th);
      const double dpdr = f.p_x(x, y, 0.0) * std::cos(th) + f.p_y(x, y, 0.0) * std::sin(th);
      EXPECT_NEAR(dpdr, 0.0, 1e-10) << "r=" << r << " th=" << th;
    }
  }
}

TEST(Ms, SlipSolutionsHaveZeroNormalVelocity) {
  // slip_d1 at the y=1 wall: v = 0; slip_d5 on both circles: u.r_hat = 0.
  const MsFuncs& d1f = ms(MsId::SlipD1);
  for (double x = 0.0; x <= 1.0; x += 0.1) EXPECT_NEAR(d1f.v(x, 1.0, 0.0), 0.0, 1e-12);
  const MsFuncs& d5f = ms(MsId::SlipD5);
  for (const double r : {0.25, 0.5})
    for (double th = 0.0; th < 6.3; th += 0.21) {
      const double x = 0.5 + r * std::cos(th), y = 0.5 + r * std::sin(th);
      const double un = d5f.u(x, y, 0.0) * std::cos(th) + d5f.v(x, y, 0.0) * std::sin(th);
      EXPECT_NEAR(un, 0.0, 1e-12);
    }
}

TEST(Ms, NoslipSolutionsVanishOnTheirWall) {
  const MsFuncs& d1f = ms(MsId::NoslipD1);
  for (double x = 0.0; x <= 1.0; x += 0.1) {
    EXPECT_NEAR(d1f.u(x, 1.0, 0.3), 0.0, 1e-12);
    EXPECT_NEAR(d1f.v(x, 1.0, 0.3), 0.0, 1e-12);
  }
  // noslip_d5 vanishes on the inner circle (convex test surface), noslip_d6
  // on the outer circle (concave test surface).
  for (double th = 0.0; th < 6.3; th += 0.17) {
    const double xi = 0.5 + 0.25 * std::cos(th), yi = 0.5 + 0.25 * std::sin(th);
    EXPECT_NEAR(ms(MsId::NoslipD5).u(xi, yi, 0.1), 0.0, 1e-12);
    EXPECT_NEAR(ms(MsId::NoslipD5).v(xi, yi, 0.1), 0.0, 1e-12);
    const double xo = 0.5 + 0.5 * std::cos(th), yo = 0.5 + 0.5 * std::sin(th);
    EXPECT_NEAR(ms(MsId::NoslipD6).u(xo, yo, 0.1), 0.0, 1e-12);
    EXPECT_NEAR(ms(MsId::NoslipD6).v(xo, yo, 0.1), 0.0, 1e-12);
  }
}

TEST(Ms, InletOutletVelocityIsStreamwiseUniformAtInterfaces) {
  const MsFuncs& f = ms(MsId::IoVel);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> yd(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double y = yd(rng);
    for (const double x : {0.0, 1.0})
      EXPECT_NEAR(d1([&](double a) { return f.v(a, y, 0.02); }, x, 1e-5), 0.0, 1e-8);
  }
}

// Residue certification against a central finite-difference oracle assembled
// purely from the field values: space step 1e-5, time step 1e-6, relative
// tolerance 1e-6 at 100 random space-time samples per solution.
TEST(Ms, ResiduesMatchFiniteDifferenceOracle) {
  const auto t0 = std::chrono::steady_clock::now();
  const double hs = 1e-5, ht = 1e-6, nu = 0.01;
  std::mt19937 rng(20260816);
  std::uniform_real_distribution<double> td(0.0, 0.05);
  for (int idn = 0; idn < int(MsId::Count); ++idn) {
    const MsId id = MsId(idn);
    const MsFuncs& f = ms(id);
    const Eos eos{co_for(id), 1.0, 0.0};
    const double c2 = eos.c_o * eos.c_o;
    for (int s = 0; s < 100; ++s) {
      const Vec2 x = sample_point(id, rng);
      const double t = td(rng);
      const MsResidues an = ms_residues(id, x, t, eos, nu);

      const double u = f.u(x.x, x.y, t), v = f.v(x.x, x.y, t);
      const double rho = eos.density(f.p(x.x, x.y, t));
      auto ux_ = [&](double a) { return f.u(a, x.y, t); };
      auto uy_ = [&](double a) { return f.u(x.x, a, t); };
      auto ut_ = [&](double a) { return f.u(x.x, x.y, a); };
      auto vx_ = [&](double a) { return f.v(a, x.y, t); };
      auto vy_ = [&](double a) { return f.v(x.x, a, t); };
      auto vt_ = [&](double a) { return f.v(x.x, x.y, a); };
      auto px_ = [&](double a) { return f.p(a, x.y, t); };
      auto py_ = [&](double a) { return f.p(x.x, a, t); };
      auto pt_ = [&](double a) { return f.p(x.x, x.y, a); };

      const double ux = d1(ux_, x.x, hs), uy = d1(uy_, x.y, hs), ut = d1(ut_, t, ht);
      const double vx = d1(vx_, x.x, hs), vy = d1(vy_, x.y, hs), vt = d1(vt_, t, ht);
      const double px = d1(px_, x.x, hs), py = d1(py_, x.y, hs), pt = d1(pt_, t, ht);
      const double uxx = d2(ux_, x.x, hs), uyy = d2(uy_, x.y, hs);
      const double vxx = d2(vx_, x.x, hs), vyy = d2(vy_, x.y, hs);

      const double rc = (pt + u * px + v * py) / c2 + rho * (ux + vy);
      const double rmx = ut + u * ux + v * uy + px / rho - nu * (uxx + uyy);
      const double rmy = vt + u * vx + v * vy + py / rho - nu * (vxx + vyy);

      EXPECT_LE(std::abs(an.cont - rc) / std::max(1.0, std::abs(an.cont)), 1e-6)
          << to_string(id) << " cont at " << x.x << "," << x.y << "," << t;
      EXPECT_LE(std::abs(an.mom.x - rmx) / std::max(1.0, std::abs(an.mom.x)), 1e-6)
          << to_string(id) << " mom.x at " << x.x << "," << x.y << "," << t;
      EXPECT_LE(std::abs(an.mom.y - rmy) / std::max(1.0, std::abs(an.mom.y)), 1e-6)
          << to_string(id) << " mom.y at " << x.x << "," << x.y << "," << t;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 10.0);
}

TEST(Ms, EosRoundTripIsExact) {
  const Eos eos{20.0, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(eos.pressure(1.01), 4.0);  // c_o^2 * 0.01
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> rd(0.9, 1.1);
  for (int k = 0; k < 1000; ++k) {
    const double rho = rd(rng);
    EXPECT_DOUBLE_EQ(eos.density(eos.pressure(rho)), rho);
  }
  const Eos bg{10.0, 1.0, 100.0};
  EXPECT_DOUBLE_EQ(bg.pressure(1.0), 100.0);
  EXPECT_DOUBLE_EQ(bg.density(100.0), 1.0);
}
