#pragma once

#include <cmath>
#include <limits>

namespace wcsph {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }

// 2x2 matrix, row-major: [[xx, xy], [yx, yy]].
struct Mat2 {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

  Mat2& operator+=(const Mat2& o) {
    xx += o.xx; xy += o.xy; yx += o.yx; yy += o.yy;
    return *this;
  }
};

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.xx - b.xx, a.xy - b.xy, a.yx - b.yx, a.yy - b.yy};
}
inline Mat2 operator*(double s, const Mat2& a) {
  return {s * a.xx, s * a.xy, s * a.yx, s * a.yy};
}
inline Mat2 operator*(const Mat2& a, double s) { return s * a; }
// Matrix times column vector.
inline Vec2 operator*(const Mat2& m, Vec2 v) {
  return {m.xx * v.x + m.xy * v.y, m.yx * v.x + m.yy * v.y};
}
// Outer product a b^T.
inline Mat2 outer(Vec2 a, Vec2 b) {
  return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}
inline Mat2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }

inline double det(const Mat2& m) { return m.xx * m.yy - m.xy * m.yx; }

inline Mat2 inverse(const Mat2& m) {
  const double d = det(m);
  return {m.yy / d, -m.xy / d, -m.yx / d, m.xx / d};
}

// Spectral condition number via singular values; inf for singular matrices.
inline double cond2(const Mat2& m) {
  // Singular values from the eigenvalues of m^T m.
  const double a = m.xx * m.xx + m.yx * m.yx;
  const double b = m.xx * m.xy + m.yx * m.yy;
  const double c = m.xy * m.xy + m.yy * m.yy;
  const double tr = a + c;
  const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b * b));
  const double smax = 0.5 * (tr + disc);
  const double smin = 0.5 * (tr - disc);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(smax / smin);
}

}  // namespace wcsph
