#include "wcsph/kernel.hpp"

#include <gtest/gtest.h>

#include <cmath>

using wcsph::KernelSpec;
using wcsph::Vec2;

TEST(Kernel, CenterValueMatchesClosedForm) {
  // sigma * f(0) = 7/(478 pi h^2) * (3^5 - 6*2^5 + 15) = 462/(478 pi h^2)
  for (const double h : {0.012, 0.5, 1.0, 3.7}) {
    const KernelSpec k(h);
    EXPECT_NEAR(k.value0(), 0.307655161960 / (h * h), 1e-9 / (h * h));
  }
}

TEST(Kernel, CompactSupport) {
  const KernelSpec k(0.024);
  EXPECT_DOUBLE_EQ(k.value(3.0 * k.h), 0.0);
  EXPECT_DOUBLE_EQ(k.value(5.0 * k.h), 0.0);
  EXPECT_GT(k.value(2.999 * k.h), 0.0);
  EXPECT_DOUBLE_EQ(k.deriv(3.0 * k.h), 0.0);
}

TEST(Kernel, PiecewiseContinuity) {
  const KernelSpec k(1.0);
  for (const double q : {1.0, 2.0}) {
    EXPECT_NEAR(k.value(q - 1e-9), k.value(q + 1e-9), 1e-7);
    EXPECT_NEAR(k.deriv(q - 1e-9), k.deriv(q + 1e-9), 1e-6);
  }
}

TEST(Kernel, DerivMatchesFiniteDifference) {
  const KernelSpec k(0.3);
  const double dr = 1e-7;
  for (double r = 0.05; r < 0.9; r += 0.037) {
    const double fd = (k.value(r + dr) - k.value(r - dr)) / (2.0 * dr);
    EXPECT_NEAR(k.deriv(r), fd, 1e-5 * std::abs(fd) + 1e-10);
  }
}

TEST(Kernel, UnitIntegralOnFineLattice) {
  // sum W(x_j) dx^2 over a lattice covering the support approximates 1.
  const double h = 1.0, dx = h / 40.0;
  const KernelSpec k(h);
  double s = 0.0;
  for (double x = -3.5 * h; x <= 3.5 * h; x += dx)
    for (double y = -3.5 * h; y <= 3.5 * h; y += dx)
      s += k.value(std::hypot(x, y)) * dx * dx;
  EXPECT_NEAR(s, 1.0, 1e-4);
}

TEST(Kernel, GradientIsAntisymmetricAndRadial) {
  const KernelSpec k(0.12);
  const Vec2 r{0.1, -0.15};
  const Vec2 g = k.grad(r);
  const Vec2 gneg = k.grad(-r);
  EXPECT_DOUBLE_EQ(g.x, -gneg.x);
  EXPECT_DOUBLE_EQ(g.y, -gneg.y);
  // Parallel to r, pointing opposite it (W decreases away from the center).
  EXPECT_NEAR(g.x * r.y - g.y * r.x, 0.0, 1e-15);
  EXPECT_LT(dot(g, r), 0.0);
  const Vec2 zero = k.grad({0.0, 0.0});
  EXPECT_EQ(zero.x, 0.0);
  EXPECT_EQ(zero.y, 0.0);
}
