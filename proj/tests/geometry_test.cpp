#include "wcsph/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wcsph;

namespace {

double min_pair_distance(const ParticleSet& ps) {
  const NeighborLists nl = build_neighbors(ps.pos, 3.0 * ps.h);
  double dmin = 1e30;
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (const auto* j = nl.begin(i); j != nl.end(i); ++j)
      dmin = std::min(dmin, norm(ps.pos[i] - ps.pos[*j]));
  return dmin;
}

}  // namespace

TEST(Interface, LineGeometry) {
  const Interface wall = Interface::line({0.0, 1.0}, {0.0, -1.0});  // fluid below y=1
  EXPECT_DOUBLE_EQ(wall.signed_dist({0.3, 0.25}), 0.75);
  EXPECT_DOUBLE_EQ(wall.signed_dist({0.3, 1.25}), -0.25);
  const Vec2 r = wall.reflect({0.4, 1.1});
  EXPECT_DOUBLE_EQ(r.x, 0.4);
  EXPECT_DOUBLE_EQ(r.y, 0.9);
  const Vec2 pr = wall.project({0.4, 0.2});
  EXPECT_DOUBLE_EQ(pr.y, 1.0);
  const Vec2 op = wall.offset_project({0.4, 0.2}, 0.05);
  EXPECT_DOUBLE_EQ(op.y, 0.95);
}

TEST(Interface, CircleGeometry) {
  // Inner circle of the annulus: solid disk, fluid outside.
  const Interface c = Interface::circle({0.5, 0.5}, 0.25, +1);
  EXPECT_NEAR(c.signed_dist({0.9, 0.5}), 0.15, 1e-15);
  EXPECT_NEAR(c.signed_dist({0.6, 0.5}), -0.15, 1e-15);
  const Vec2 n = c.normal_at({0.9, 0.5});
  EXPECT_NEAR(n.x, 1.0, 1e-15);
  EXPECT_NEAR(n.y, 0.0, 1e-15);
  const Vec2 r = c.reflect({0.8, 0.5});  // r=0.3 -> 0.2
  EXPECT_NEAR(r.x, 0.7, 1e-15);
  EXPECT_NEAR(r.y, 0.5, 1e-15);
  // Outer circle: fluid inside.
  const Interface o = Interface::circle({0.5, 0.5}, 0.5, -1);
  EXPECT_NEAR(o.signed_dist({0.5, 0.1}), 0.1, 1e-15);
  const Vec2 no = o.normal_at({0.5, 0.05});
  EXPECT_NEAR(no.y, 1.0, 1e-15);
}

TEST(Geometry, StraightDomainCountsMatchReference) {
  DomainConfig cfg;
  cfg.shape = Shape::Straight;
  cfg.dx = 0.01;
  const Domain dom = generate_domain(cfg);
  long fluid = 0, test_wall = 0, greens = 0;
  for (std::size_t i = 0; i < dom.ps.size(); ++i) {
    if (dom.ps.tag[i] == Tag::Fluid) ++fluid;
    if (dom.surface[i] == 0) ++test_wall;
    if (dom.green[i]) ++greens;
  }
  EXPECT_EQ(fluid, 10000);
  EXPECT_EQ(test_wall, 600);
  EXPECT_GT(greens, 0);
  // Tested wall normals point down into the fluid.
  for (std::size_t i = 0; i < dom.ps.size(); ++i)
    if (dom.surface[i] == 0) {
      ASSERT_DOUBLE_EQ(dom.ps.normal[i].y, -1.0);
      ASSERT_GT(dom.ps.pos[i].y, 1.0);
      ASSERT_FALSE(dom.green[i]);
    }
  EXPECT_GT(min_pair_distance(dom.ps), 0.5 * cfg.dx);
}

TEST(Geometry, StraightOnSurfaceAndThinLayers) {
  DomainConfig cfg;
  cfg.shape = Shape::Straight;
  cfg.dx = 0.02;
  cfg.test = {1, true};
  const Domain dom = generate_domain(cfg);
  long test_wall = 0;
  for (std::size_t i = 0; i < dom.ps.size(); ++i)
    if (dom.surface[i] == 0) {
      ++test_wall;
      ASSERT_DOUBLE_EQ(dom.ps.pos[i].y, 1.0);
    }
  EXPECT_EQ(test_wall, 50);

  cfg.test = {2, false};
  const Domain two = generate_domain(cfg);
  long wall2 = 0;
  double ymax = 0.0;
  for (std::size_t i = 0; i < two.ps.size(); ++i)
    if (two.surface[i] == 0) {
      ++wall2;
      ymax = std::max(ymax, two.ps.pos[i].y);
    }
  EXPECT_EQ(wall2, 100);
  EXPECT_NEAR(ymax, 1.0 + 1.5 * cfg.dx, 1e-12);
}

TEST(Geometry, AnnulusDomainsPlaceTestSurfaceCorrectly) {
  for (const Shape shape : {Shape::Convex, Shape::Concave}) {
    DomainConfig cfg;
    cfg.shape = shape;
    cfg.dx = 0.02;
    const Domain dom = generate_domain(cfg);
    const double area = M_PI * (0.5 * 0.5 - 0.25 * 0.25);
    long fluid = 0;
    for (std::size_t i = 0; i < dom.ps.size(); ++i) {
      const double r = norm(dom.ps.pos[i] - Vec2{0.5, 0.5});
      if (dom.ps.tag[i] == Tag::Fluid) {
        ++fluid;
        ASSERT_GT(r, 0.25);
        ASSERT_LT(r, 0.5);
      } else if (dom.surface[i] == 0) {
        // Tested ghosts on the solid side of the tested circle.
        if (shape == Shape::Convex) {
          ASSERT_LE(r, 0.25);
        } else {
          ASSERT_GE(r, 0.5);
        }
        ASSERT_FALSE(dom.green[i]);
        // Normal points into the fluid: outward for the inner circle.
        const Vec2 rad = dom.ps.pos[i] - Vec2{0.5, 0.5};
        const double along = dot(dom.ps.normal[i], rad);
        if (shape == Shape::Convex) {
          ASSERT_GT(along, 0.0);
        } else {
          ASSERT_LT(along, 0.0);
        }
      }
    }
    EXPECT_NEAR(fluid * cfg.dx * cfg.dx, area, 0.03 * area);
  }
}

TEST(Geometry, PackedConcaveHugsInterfaces) {
  DomainConfig cfg;
  cfg.shape = Shape::PackedConcave;
  cfg.dx = 0.02;
  Domain dom = generate_domain(cfg);

  // Nearest fluid layer concentrated at dx/2 from each interface.
  long near_layer = 0, off_target = 0;
  for (std::size_t i = 0; i < dom.ps.size(); ++i) {
    if (dom.ps.tag[i] != Tag::Fluid) continue;
    double d = 1e30;
    for (const Interface& s : dom.interfaces) d = std::min(d, s.signed_dist(dom.ps.pos[i]));
    ASSERT_GT(d, 0.0);  // never crosses into the solid
    if (d < 1.0 * cfg.dx) {
      ++near_layer;
      if (std::abs(d - 0.5 * cfg.dx) > 0.2 * cfg.dx) ++off_target;
    }
  }
  EXPECT_GT(near_layer, 100);
  EXPECT_EQ(off_target, 0);
  EXPECT_GT(min_pair_distance(dom.ps), 0.5 * cfg.dx);

  // Ring ghosts on both circles.
  long test_ghosts = 0, green_ghosts = 0;
  for (std::size_t i = 0; i < dom.ps.size(); ++i) {
    if (dom.surface[i] == 0) ++test_ghosts;
    if (dom.green[i]) ++green_ghosts;
  }
  EXPECT_GT(test_ghosts, 0);
  EXPECT_GT(green_ghosts, 0);

  // Interior spacing stays near the lattice pitch.
  const NeighborLists nl = build_neighbors(dom.ps.pos, 3.0 * dom.ps.h);
  double mean_nn = 0.0;
  long cnt = 0;
  for (std::size_t i = 0; i < dom.ps.size(); ++i) {
    if (dom.ps.tag[i] != Tag::Fluid) continue;
    double dmin = 1e30;
    for (const auto* j = nl.begin(i); j != nl.end(i); ++j)
      dmin = std::min(dmin, norm(dom.ps.pos[i] - dom.ps.pos[*j]));
    mean_nn += dmin;
    ++cnt;
  }
  mean_nn /= cnt;
  EXPECT_GT(mean_nn, 0.8 * cfg.dx);
  EXPECT_LT(mean_nn, 1.1 * cfg.dx);
}

TEST(Geometry, IoChannelLayout) {
  DomainConfig cfg;
  cfg.shape = Shape::IoChannel;
  cfg.dx = 0.02;
  const Domain dom = generate_domain(cfg);
  ASSERT_TRUE(dom.has_io);
  long inlet = 0, outlet = 0, walls = 0;
  for (std::size_t i = 0; i < dom.ps.size(); ++i) {
    switch (dom.ps.tag[i]) {
      case Tag::Inlet:
        ++inlet;
        ASSERT_LT(dom.ps.pos[i].x, 0.0);
        ASSERT_GT(dom.ps.pos[i].x, -6.0 * cfg.dx);
        break;
      case Tag::Outlet:
        ++outlet;
        ASSERT_GT(dom.ps.pos[i].x, 1.0);
        break;
      case Tag::Solid:
        ++walls;
        ASSERT_TRUE(dom.green[i]);
        break;
      default:
        break;
    }
  }
  EXPECT_EQ(inlet, 6 * 50);
  EXPECT_EQ(outlet, 6 * 50);
  EXPECT_GT(walls, 0);
  EXPECT_FALSE(dom.in_fluid_region({-0.01, 0.5}));
  EXPECT_FALSE(dom.in_fluid_region({0.5, 1.02}));
  EXPECT_TRUE(dom.in_fluid_region({0.5, 0.5}));
}
