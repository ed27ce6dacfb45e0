#pragma once

#include <cmath>

namespace leastgrad {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

/// Symmetric 2x2 tensor [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;

  constexpr Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
  constexpr double quad(const Vec2& v) const { return dot(v, apply(v)); }
  constexpr double det() const { return xx * yy - xy * xy; }
  constexpr Sym2 inverse() const {
    const double d = det();
    return {yy / d, -xy / d, xx / d};
  }
  friend constexpr bool operator==(const Sym2&, const Sym2&) = default;

  static constexpr Sym2 identity() { return {1.0, 0.0, 1.0}; }
  static constexpr Sym2 diag(double a, double b) { return {a, 0.0, b}; }
};

/// Eigen-decomposition of a symmetric 2x2 tensor: values ascending, columns orthonormal.
struct SymEigen2 {
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  Vec2 v_min{1.0, 0.0};  // eigenvector for lambda_min
  Vec2 v_max{0.0, 1.0};
};

inline SymEigen2 eigen_decompose(const Sym2& s) {
  const double mean = 0.5 * (s.xx + s.yy);
  const double half_diff = 0.5 * (s.xx - s.yy);
  const double r = std::hypot(half_diff, s.xy);
  SymEigen2 e;
  e.lambda_min = mean - r;
  e.lambda_max = mean + r;
  if (r == 0.0) {
    return e;
  }
  // Angle of the major axis.
  const double theta = 0.5 * std::atan2(s.xy, half_diff);
  e.v_max = {std::cos(theta), std::sin(theta)};
  e.v_min = {-std::sin(theta), std::cos(theta)};
  return e;
}

}  // namespace leastgrad
