#pragma once

#include <cmath>

#include "wcsph/vec.hpp"

namespace wcsph {

// Quintic spline kernel in 2D, support radius 3h, normalization 7/(478 pi h^2).
struct KernelSpec {
  double h = 0.0;

  explicit KernelSpec(double h_) : h(h_) {}

  double support() const { return 3.0 * h; }

  // W(|r|). Piecewise quintic in q = |r|/h.
  double value(double r) const {
    const double q = r / h;
    if (q >= 3.0) return 0.0;
    const double sigma = 7.0 / (478.0 * M_PI * h * h);
    const double a = 3.0 - q, b = 2.0 - q, c = 1.0 - q;
    double f = a * a * a * a * a;
    if (q < 2.0) f -= 6.0 * b * b * b * b * b;
    if (q < 1.0) f += 15.0 * c * c * c * c * c;
    return sigma * f;
  }

  double value0() const { return value(0.0); }  // 66 * 7/(478 pi h^2)

  // dW/dr at |r|; zero at r = 0 and beyond the support.
  double deriv(double r) const {
    const double q = r / h;
    if (q >= 3.0) return 0.0;
    const double sigma = 7.0 / (478.0 * M_PI * h * h);
    const double a = 3.0 - q, b = 2.0 - q, c = 1.0 - q;
    double f = -5.0 * a * a * a * a;
    if (q < 2.0) f += 30.0 * b * b * b * b;
    if (q < 1.0) f -= 75.0 * c * c * c * c;
    return sigma * f / h;
  }

  // Gradient w.r.t. the destination position; rij = x_dest - x_src.
  // Antisymmetric in rij, exactly zero at rij = 0.
  Vec2 grad(Vec2 rij) const {
    const double r = norm(rij);
    if (r < 1e-12 * h) return {0.0, 0.0};
    const double w1 = deriv(r) / r;
    return {w1 * rij.x, w1 * rij.y};
  }
};

}  // namespace wcsph
