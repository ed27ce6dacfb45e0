#pragma once

// Shared helpers for the unit tests: random fields and oracles that do not
// go through the library code they check.

#include <cmath>
#include <numbers>
#include <random>

#include "leastgrad/grid.hpp"
#include "leastgrad/metric.hpp"

namespace lgtest {

using namespace leastgrad;

inline ScalarGrid random_scalar(const GridGeometry& g, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  ScalarGrid s(g);
  for (int c = 0; c < g.cells(); ++c) s[c] = d(rng);
  return s;
}

inline VectorGrid random_vector(const GridGeometry& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  VectorGrid v(g);
  for (int c = 0; c < g.cells(); ++c) v[c] = {d(rng), d(rng)};
  return v;
}

// phi written out from the definitions, independent of LocalNorm.
inline double phi_direct(NormKind kind, double a, const Sym2& s, Vec2 xi) {
  switch (kind) {
    case NormKind::IsotropicEuclidean:
      return a * std::sqrt(xi.x * xi.x + xi.y * xi.y);
    case NormKind::Riemannian:
      return a * std::sqrt(s.xx * xi.x * xi.x + 2.0 * s.xy * xi.x * xi.y + s.yy * xi.y * xi.y);
    case NormKind::CrystallineL1:
      return a * (std::abs(xi.x) + std::abs(xi.y));
    case NormKind::CrystallineLinf:
      return a * std::max(std::abs(xi.x), std::abs(xi.y));
  }
  return 0.0;
}

// sup over n equally spaced unit p of xi.p / phi(p).
inline double dual_sweep(NormKind kind, double a, const Sym2& s, Vec2 xi, int n) {
  double best = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    const Vec2 p{std::cos(t), std::sin(t)};
    best = std::max(best, (xi.x * p.x + xi.y * p.y) / phi_direct(kind, a, s, p));
  }
  return best;
}

// Square root of an SPD 2x2 matrix: (S + sqrt(det) I) / sqrt(tr + 2 sqrt(det)).
inline Sym2 sqrt_spd(const Sym2& s) {
  const double r = std::sqrt(s.xx * s.yy - s.xy * s.xy);
  const double t = std::sqrt(s.xx + s.yy + 2.0 * r);
  return {(s.xx + r) / t, s.xy / t, (s.yy + r) / t};
}

// Nearest point to xi on the ellipse {eta : eta^T S^{-1} eta = a^2}, found by
// a dense angle sweep followed by ternary refinement.
inline Vec2 nearest_on_ellipse(double a, const Sym2& s, Vec2 xi) {
  const Sym2 r = sqrt_spd(s);
  const auto point = [&](double t) {
    const Vec2 c{std::cos(t), std::sin(t)};
    return Vec2{a * (r.xx * c.x + r.xy * c.y), a * (r.xy * c.x + r.yy * c.y)};
  };
  const auto dist2 = [&](double t) {
    const Vec2 p = point(t);
    return (p.x - xi.x) * (p.x - xi.x) + (p.y - xi.y) * (p.y - xi.y);
  };
  const int n = 20000;
  const double step = 2.0 * std::numbers::pi / n;
  double best_t = 0.0;
  double best = dist2(0.0);
  for (int k = 1; k < n; ++k) {
    const double d = dist2(k * step);
    if (d < best) {
      best = d;
      best_t = k * step;
    }
  }
  double lo = best_t - step, hi = best_t + step;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (dist2(m1) < dist2(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return point(0.5 * (lo + hi));
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace lgtest
