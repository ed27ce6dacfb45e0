#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "leastgrad/grid.hpp"
#include "leastgrad/vec2.hpp"

namespace leastgrad {

enum class NormKind { IsotropicEuclidean, Riemannian, CrystallineL1, CrystallineLinf };

const char* to_string(NormKind k);
NormKind parse_norm_kind(std::string_view text);

inline constexpr double kDefaultWeightFloor = 1e-8;
inline constexpr double kDefaultEigenFloor = 1e-10;

/// The norm phi(x, .) at a single cell: a(x) times the kind's base norm.
///   IsotropicEuclidean  a |xi|
///   Riemannian          a sqrt(xi^T sigma0 xi)
///   CrystallineL1       a |xi|_1
///   CrystallineLinf     a |xi|_inf
class LocalNorm {
 public:
  LocalNorm(NormKind kind, double weight, Sym2 sigma0 = Sym2::identity());

  NormKind kind() const { return kind_; }
  double weight() const { return a_; }
  const Sym2& tensor() const { return sigma_; }

  double phi(const Vec2& xi) const;
  /// Closed-form dual norm phi^0. Throws InvalidMetricError on a non-positive
  /// weight or a tensor eigenvalue below `eigen_floor`.
  double dual(const Vec2& xi, double eigen_floor = kDefaultEigenFloor) const;
  /// Euclidean projection onto {eta : phi^0(eta) <= 1}.
  Vec2 project(const Vec2& xi) const;
  /// Gradient of phi in xi, for the differentiable kinds only.
  Vec2 phi_gradient(const Vec2& xi) const;
  /// sup_{|xi| = 1} phi(xi).
  double max_stretch() const;

 private:
  Vec2 project_ellipse(const Vec2& xi) const;

  NormKind kind_;
  double a_;
  Sym2 sigma_;
  SymEigen2 eig_;
};

/// The family phi(x, .) sampled at cell centres. Face evaluations use the
/// adjacent interior cell.
class MetricField {
 public:
  MetricField() = default;
  MetricField(NormKind kind, ScalarGrid weight, std::vector<Sym2> sigma0 = {});

  static MetricField constant(NormKind kind, const GridGeometry& g, double weight,
                              Sym2 sigma0 = Sym2::identity());

  NormKind kind() const { return kind_; }
  const GridGeometry& geometry() const { return a_.geometry(); }
  const ScalarGrid& weight() const { return a_; }
  /// Identity when the kind is not Riemannian.
  Sym2 tensor(int cell) const;
  const std::vector<Sym2>& tensors() const { return sigma_; }

  /// Throws DomainError for an index outside the grid.
  LocalNorm at(int cell) const;

  /// Same norm family with every weight multiplied by `lambda`.
  MetricField scaled(double lambda) const;

 private:
  NormKind kind_ = NormKind::IsotropicEuclidean;
  ScalarGrid a_;
  std::vector<Sym2> sigma_;
};

double eval_phi(const MetricField& m, int cell, const Vec2& xi);
double eval_dual(const MetricField& m, int cell, const Vec2& xi);
/// max over n_dirs equally spaced unit p of xi.p / phi(p); an independent
/// lower estimate of eval_dual. Requires n_dirs >= 8.
double dual_norm_sampled(const MetricField& m, int cell, const Vec2& xi, int n_dirs);
Vec2 project_dual_ball(const MetricField& m, int cell, const Vec2& xi);

struct MetricViolation {
  int cell = -1;
  std::string message;
};

struct MetricValidation {
  bool valid = true;
  /// sup over interior cells of phi(x, xi)/|xi|.
  double alpha = 0.0;
  std::vector<MetricViolation> violations;
};

/// Checks (C1)/(C2)-style conditions on interior cells: weight floor, SPD
/// tensors, homogeneity and the triangle inequality on a fixed sample.
/// Never throws on bad data; every problem becomes a violation.
MetricValidation validate(const MetricField& m, const DomainMask& mask, double weight_floor = kDefaultWeightFloor,
                          double eigen_floor = kDefaultEigenFloor);

}  // namespace leastgrad
