#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "wcsph/kernel.hpp"
#include "wcsph/neighbors.hpp"
#include "wcsph/particles.hpp"

namespace wcsph {

// Numerical volume omega_i = 1 / sum_k W_ik, self term included.
inline void compute_volumes(ParticleSet& ps, const NeighborLists& nl) {
  const KernelSpec kern(ps.h);
  const double w0 = kern.value0();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)ps.size(); ++i) {
    double s = w0;
    for (const auto* j = nl.begin(i); j != nl.end(i); ++j)
      s += kern.value(norm(ps.pos[i] - ps.pos[*j]));
    ps.vol[i] = 1.0 / s;
  }
}

// First-order kernel-gradient correction: B_i = M_i^-1 with
// M_i = sum_j (x_j - x_i) (x) grad W_ij omega_j. Destinations whose moment
// matrix is singular or worse-conditioned than cond_limit fall back to the
// identity (uncorrected gradient) and are counted in `singular`.
inline void compute_corrections(const ParticleSet& ps, const NeighborLists& nl,
                                std::vector<Mat2>& B, double cond_limit = 1e8,
                                long* singular = nullptr) {
  const KernelSpec kern(ps.h);
  B.resize(ps.size());
  long bad = 0;
#pragma omp parallel for schedule(static) reduction(+ : bad)
  for (long long i = 0; i < (long long)ps.size(); ++i) {
    Mat2 m{};
    for (const auto* j = nl.begin(i); j != nl.end(i); ++j) {
      const Vec2 dx = ps.pos[*j] - ps.pos[i];
      m += ps.vol[*j] * outer(dx, kern.grad(-dx));
    }
    if (std::abs(det(m)) < 1e-300 || cond2(m) > cond_limit) {
      B[i] = identity2();
      ++bad;
    } else {
      B[i] = inverse(m);
    }
  }
  if (singular) *singular += bad;
}

// grad f_i = sum_j (f_j - f_i) B_i grad W_ij omega_j; exact for affine f
// wherever B_i is not degraded.
inline std::vector<Vec2> corrected_gradient(const ParticleSet& ps, const NeighborLists& nl,
                                            const std::vector<Mat2>& B,
                                            const std::vector<double>& f) {
  const KernelSpec kern(ps.h);
  std::vector<Vec2> g(ps.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)ps.size(); ++i) {
    Vec2 acc{};
    for (const auto* j = nl.begin(i); j != nl.end(i); ++j) {
      const Vec2 gw = B[i] * kern.grad(ps.pos[i] - ps.pos[*j]);
      acc += (f[*j] - f[i]) * ps.vol[*j] * gw;
    }
    g[i] = acc;
  }
  return g;
}

// div u_i = sum_j (u_j - u_i) . B_i grad W_ij omega_j.
inline std::vector<double> corrected_divergence(const ParticleSet& ps, const NeighborLists& nl,
                                                const std::vector<Mat2>& B,
                                                const std::vector<Vec2>& u) {
  const KernelSpec kern(ps.h);
  std::vector<double> d(ps.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)ps.size(); ++i) {
    double acc = 0.0;
    for (const auto* j = nl.begin(i); j != nl.end(i); ++j) {
      const Vec2 gw = B[i] * kern.grad(ps.pos[i] - ps.pos[*j]);
      acc += dot(u[*j] - u[i], gw) * ps.vol[*j];
    }
    d[i] = acc;
  }
  return d;
}

// (grad u)_i, rows = velocity components, columns = space derivatives:
// (grad u)_ab = d u_a / d x_b.
inline std::vector<Mat2> velocity_gradient(const ParticleSet& ps, const NeighborLists& nl,
                                           const std::vector<Mat2>& B,
                                           const std::vector<Vec2>& u) {
  const KernelSpec kern(ps.h);
  std::vector<Mat2> g(ps.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)ps.size(); ++i) {
    Mat2 acc{};
    for (const auto* j = nl.begin(i); j != nl.end(i); ++j) {
      const Vec2 gw = B[i] * kern.grad(ps.pos[i] - ps.pos[*j]);
      acc += outer(u[*j] - u[i], gw) * ps.vol[*j];
    }
    g[i] = acc;
  }
  return g;
}

// Divergence of the sampled velocity-gradient field: approximates the vector
// Laplacian of u when grad_u holds first-order-accurate gradients.
inline std::vector<Vec2> divergence_of_gradient(const ParticleSet& ps, const NeighborLists& nl,
                                                const std::vector<Mat2>& B,
                                                const std::vector<Mat2>& grad_u) {
  const KernelSpec kern(ps.h);
  std::vector<Vec2> lap(ps.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)ps.size(); ++i) {
    Vec2 acc{};
    for (const auto* j = nl.begin(i); j != nl.end(i); ++j) {
      const Vec2 gw = B[i] * kern.grad(ps.pos[i] - ps.pos[*j]);
      acc += (grad_u[*j] - grad_u[i]) * gw * ps.vol[*j];
    }
    lap[i] = acc;
  }
  return lap;
}

// Shepard point interpolation: f(x0) = sum f_j W_j / sum W_j (no volume
// weights). Returns {value, weight sum}; a zero weight sum means no support.
inline std::pair<double, double> shepard_point(Vec2 x0, std::span<const std::uint32_t> js,
                                               const std::vector<Vec2>& pos,
                                               const std::vector<double>& f,
                                               const KernelSpec& kern) {
  double num = 0.0, den = 0.0;
  for (const std::uint32_t j : js) {
    const double w = kern.value(norm(x0 - pos[j]));
    num += w * f[j];
    den += w;
  }
  return {den > 0.0 ? num / den : 0.0, den};
}

// First-order moving-least-squares fit at a point: value and gradient that
// reproduce affine data exactly. Weighted by W_j * omega_j. On a singular or
// ill-conditioned moment system the fit degrades to Shepard (gradient zero)
// and reports `degraded`; with no support at all it reports `empty`.
struct MlsPointResult {
  double value = 0.0;
  Vec2 grad{};
  bool degraded = false;
  bool empty = true;
};

template <std::size_t K>
inline std::array<MlsPointResult, K> mls_point(Vec2 x0, std::span<const std::uint32_t> js,
                                               const std::vector<Vec2>& pos,
                                               const std::vector<double>& vol,
                                               const std::array<const std::vector<double>*, K>& fields,
                                               const KernelSpec& kern) {
  std::array<MlsPointResult, K> out{};
  // Normal equations in basis (1, dx/h, dy/h) for conditioning.
  double A[3][3] = {};
  std::array<std::array<double, 3>, K> rhs{};
  double wsum = 0.0;
  for (const std::uint32_t j : js) {
    const Vec2 d = pos[j] - x0;
    const double w = kern.value(norm(d)) * vol[j];
    if (w <= 0.0) continue;
    wsum += w;
    const double phi[3] = {1.0, d.x / kern.h, d.y / kern.h};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) A[a][b] += w * phi[a] * phi[b];
    for (std::size_t k = 0; k < K; ++k)
      for (int a = 0; a < 3; ++a) rhs[k][a] += w * phi[a] * (*fields[k])[j];
  }
  if (wsum <= 0.0) return out;

  // Gaussian elimination with partial pivoting; tiny pivots flag degradation.
  double aug[3][3 + K];
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) aug[a][b] = A[a][b];
    for (std::size_t k = 0; k < K; ++k) aug[a][3 + k] = rhs[k][a];
  }
  bool degraded = false;
  const double scale = std::max({A[0][0], A[1][1], A[2][2], 1e-300});
  for (int col = 0; col < 3 && !degraded; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
    if (std::abs(aug[piv][col]) < 1e-10 * scale) {
      degraded = true;
      break;
    }
    if (piv != col)
      for (std::size_t c = 0; c < 3 + K; ++c) std::swap(aug[col][c], aug[piv][c]);
    for (int r = col + 1; r < 3; ++r) {
      const double m = aug[r][col] / aug[col][col];
      for (std::size_t c = col; c < 3 + K; ++c) aug[r][c] -= m * aug[col][c];
    }
  }

  for (std::size_t k = 0; k < K; ++k) {
    out[k].empty = false;
    if (degraded) {
      // Shepard fallback on the same weights.
      double num = 0.0, den = 0.0;
      for (const std::uint32_t j : js) {
        const double w = kern.value(norm(x0 - pos[j])) * vol[j];
        num += w * (*fields[k])[j];
        den += w;
      }
      out[k].value = num / den;
      out[k].degraded = true;
      continue;
    }
    double c[3];
    for (int r = 2; r >= 0; --r) {
      double s = aug[r][3 + k];
      for (int cc = r + 1; cc < 3; ++cc) s -= aug[r][cc] * c[cc];
      c[r] = s / aug[r][r];
    }
    out[k].value = c[0];
    out[k].grad = {c[1] / kern.h, c[2] / kern.h};
  }
  return out;
}

}  // namespace wcsph
