#include "leastgrad/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "leastgrad/errors.hpp"

namespace leastgrad {

const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::IsotropicEuclidean:
      return "isotropic";
    case NormKind::Riemannian:
      return "riemannian";
    case NormKind::CrystallineL1:
      return "l1";
    case NormKind::CrystallineLinf:
      return "linf";
  }
  return "?";
}

NormKind parse_norm_kind(std::string_view text) {
  if (text == "isotropic" || text == "euclidean") return NormKind::IsotropicEuclidean;
  if (text == "riemannian") return NormKind::Riemannian;
  if (text == "l1") return NormKind::CrystallineL1;
  if (text == "linf") return NormKind::CrystallineLinf;
  throw InvalidMetricError("unknown metric kind '" + std::string(text) + "'");
}

LocalNorm::LocalNorm(NormKind kind, double weight, Sym2 sigma0)
    : kind_(kind), a_(weight), sigma_(kind == NormKind::Riemannian ? sigma0 : Sym2::identity()) {
  eig_ = eigen_decompose(sigma_);
}

double LocalNorm::phi(const Vec2& xi) const {
  switch (kind_) {
    case NormKind::IsotropicEuclidean:
      return a_ * norm(xi);
    case NormKind::Riemannian:
      return a_ * std::sqrt(std::max(sigma_.quad(xi), 0.0));
    case NormKind::CrystallineL1:
      return a_ * (std::abs(xi.x) + std::abs(xi.y));
    case NormKind::CrystallineLinf:
      return a_ * std::max(std::abs(xi.x), std::abs(xi.y));
  }
  return 0.0;
}

double LocalNorm::dual(const Vec2& xi, double eigen_floor) const {
  if (!(a_ > 0.0)) throw InvalidMetricError("dual norm needs a positive weight");
  switch (kind_) {
    case NormKind::IsotropicEuclidean:
      return norm(xi) / a_;
    case NormKind::Riemannian: {
      if (eig_.lambda_min < eigen_floor) {
        std::ostringstream os;
        os << "tensor eigenvalue " << eig_.lambda_min << " below floor " << eigen_floor;
        throw InvalidMetricError(os.str());
      }
      // Inverse applied in the eigenbasis keeps this well conditioned.
      const double z1 = dot(eig_.v_min, xi);
      const double z2 = dot(eig_.v_max, xi);
      return std::sqrt(z1 * z1 / eig_.lambda_min + z2 * z2 / eig_.lambda_max) / a_;
    }
    case NormKind::CrystallineL1:
      return std::max(std::abs(xi.x), std::abs(xi.y)) / a_;
    case NormKind::CrystallineLinf:
      return (std::abs(xi.x) + std::abs(xi.y)) / a_;
  }
  return 0.0;
}

Vec2 LocalNorm::project(const Vec2& xi) const {
  switch (kind_) {
    case NormKind::IsotropicEuclidean: {
      const double r = norm(xi);
      return r > a_ ? (a_ / r) * xi : xi;
    }
    case NormKind::Riemannian:
      return project_ellipse(xi);
    case NormKind::CrystallineL1:
      return {std::clamp(xi.x, -a_, a_), std::clamp(xi.y, -a_, a_)};
    case NormKind::CrystallineLinf: {
      const double ax = std::abs(xi.x);
      const double ay = std::abs(xi.y);
      if (ax + ay <= a_) return xi;
      // Soft threshold onto the l1 ball of radius a.
      double theta = 0.5 * (ax + ay - a_);
      if (std::min(ax, ay) <= theta) theta = std::max(ax, ay) - a_;
      return {std::copysign(std::max(ax - theta, 0.0), xi.x), std::copysign(std::max(ay - theta, 0.0), xi.y)};
    }
  }
  return xi;
}

Vec2 LocalNorm::project_ellipse(const Vec2& xi) const {
  // Ellipse {eta : sum eta_i^2 / s_i^2 <= 1} in the eigenbasis, s_i^2 = a^2 lambda_i.
  const double s1 = a_ * a_ * eig_.lambda_min;
  const double s2 = a_ * a_ * eig_.lambda_max;
  const double z1 = dot(eig_.v_min, xi);
  const double z2 = dot(eig_.v_max, xi);
  if (z1 * z1 / s1 + z2 * z2 / s2 <= 1.0) return xi;
  if (s2 - s1 <= 1e-14 * s2) {
    const double r = norm(xi);
    const double radius = std::sqrt(s2);
    return (radius / r) * xi;
  }
  // Secular equation r(mu) = 1 with r(mu)^2 = sum (s_i z_i / (s_i + mu))^2
  // written as q(mu) = 1/r(mu) - 1, which is increasing, concave and nearly
  // linear; Newton iterates from mu = 0 approach the root monotonically.
  double mu = 0.0;
  double q = 0.0;
  for (int it = 0; it < 50; ++it) {
    const double w1 = std::sqrt(s1) * z1 / (s1 + mu);
    const double w2 = std::sqrt(s2) * z2 / (s2 + mu);
    const double r = std::hypot(w1, w2);
    q = 1.0 / r - 1.0;
    if (std::abs(q) <= 1e-12) {
      const double e1 = s1 * z1 / (s1 + mu);
      const double e2 = s2 * z2 / (s2 + mu);
      Vec2 eta = e1 * eig_.v_min + e2 * eig_.v_max;
      const double d = dual(eta, 0.0);
      if (d > 1.0) eta *= 1.0 / d;
      return eta;
    }
    const double dq = (w1 * w1 / (s1 + mu) + w2 * w2 / (s2 + mu)) / (r * r * r);
    mu -= q / dq;
  }
  std::ostringstream os;
  os.precision(17);
  os << "ellipse projection did not converge: xi=(" << xi.x << "," << xi.y << ") a=" << a_ << " sigma=[" << sigma_.xx
     << "," << sigma_.xy << "," << sigma_.yy << "] mu=" << mu << " residual=" << q;
  throw NumericalError(os.str());
}

Vec2 LocalNorm::phi_gradient(const Vec2& xi) const {
  switch (kind_) {
    case NormKind::IsotropicEuclidean: {
      const double r = norm(xi);
      return r > 0.0 ? (a_ / r) * xi : Vec2{};
    }
    case NormKind::Riemannian: {
      const double q = std::sqrt(sigma_.quad(xi));
      return q > 0.0 ? (a_ / q) * sigma_.apply(xi) : Vec2{};
    }
    case NormKind::CrystallineL1:
    case NormKind::CrystallineLinf:
      break;
  }
  throw InvalidMetricError(std::string("phi is not differentiable for kind ") + to_string(kind_));
}

double LocalNorm::max_stretch() const {
  switch (kind_) {
    case NormKind::IsotropicEuclidean:
    case NormKind::CrystallineLinf:
      return a_;
    case NormKind::Riemannian:
      return a_ * std::sqrt(std::max(eig_.lambda_max, 0.0));
    case NormKind::CrystallineL1:
      return a_ * std::numbers::sqrt2;
  }
  return a_;
}

MetricField::MetricField(NormKind kind, ScalarGrid weight, std::vector<Sym2> sigma0)
    : kind_(kind), a_(std::move(weight)), sigma_(std::move(sigma0)) {
  if (kind_ == NormKind::Riemannian) {
    if (sigma_.empty()) sigma_.assign(static_cast<std::size_t>(a_.geometry().cells()), Sym2::identity());
    if (sigma_.size() != static_cast<std::size_t>(a_.geometry().cells())) {
      throw DimensionError("tensor field size does not match weight grid");
    }
  } else {
    sigma_.clear();
  }
}

MetricField MetricField::constant(NormKind kind, const GridGeometry& g, double weight, Sym2 sigma0) {
  std::vector<Sym2> s;
  if (kind == NormKind::Riemannian) s.assign(static_cast<std::size_t>(g.cells()), sigma0);
  return MetricField(kind, ScalarGrid(g, weight), std::move(s));
}

Sym2 MetricField::tensor(int cell) const {
  return sigma_.empty() ? Sym2::identity() : sigma_[static_cast<std::size_t>(cell)];
}

LocalNorm MetricField::at(int cell) const {
  if (cell < 0 || cell >= geometry().cells()) {
    throw DomainError("cell index " + std::to_string(cell) + " outside the metric grid");
  }
  return LocalNorm(kind_, a_[cell], tensor(cell));
}

MetricField MetricField::scaled(double lambda) const {
  ScalarGrid a = a_;
  for (double& v : a.values()) v *= lambda;
  return MetricField(kind_, std::move(a), sigma_);
}

double eval_phi(const MetricField& m, int cell, const Vec2& xi) { return m.at(cell).phi(xi); }

double eval_dual(const MetricField& m, int cell, const Vec2& xi) { return m.at(cell).dual(xi); }

double dual_norm_sampled(const MetricField& m, int cell, const Vec2& xi, int n_dirs) {
  if (n_dirs < 8) throw DomainError("dual_norm_sampled needs at least 8 directions");
  const LocalNorm local = m.at(cell);
  double best = 0.0;
  for (int k = 0; k < n_dirs; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n_dirs;
    const Vec2 p{std::cos(t), std::sin(t)};
    best = std::max(best, dot(xi, p) / local.phi(p));
  }
  return best;
}

Vec2 project_dual_ball(const MetricField& m, int cell, const Vec2& xi) { return m.at(cell).project(xi); }

MetricValidation validate(const MetricField& m, const DomainMask& mask, double weight_floor, double eigen_floor) {
  MetricValidation report;
  const auto flag = [&](int cell, std::string msg) {
    report.valid = false;
    report.violations.push_back({cell, std::move(msg)});
  };
  if (!(m.geometry() == mask.geometry())) {
    flag(-1, "metric grid does not match the domain grid");
    return report;
  }
  // Fixed probe set: unit directions plus a few generic vectors.
  std::vector<Vec2> probes;
  constexpr int kDirs = 256;
  for (int k = 0; k < kDirs; ++k) {
    const double t = 2.0 * std::numbers::pi * k / kDirs;
    probes.push_back({std::cos(t), std::sin(t)});
  }
  const Vec2 pairs[][2] = {{{1.0, 0.0}, {0.0, 1.0}},   {{0.3, -1.7}, {2.2, 0.4}}, {{-1.1, 0.9}, {0.5, 0.5}},
                           {{3.0, 4.0}, {-3.0, -4.0}}, {{1e-3, 2.0}, {7.0, -1e-3}}};
  for (int c : mask.interior_cells()) {
    const double a = m.weight()[c];
    if (!std::isfinite(a) || !(a >= weight_floor)) {
      flag(c, "weight not positive");
      continue;
    }
    const LocalNorm local = m.at(c);
    if (m.kind() == NormKind::Riemannian) {
      const Sym2 s = m.tensor(c);
      const SymEigen2 e = eigen_decompose(s);
      if (!std::isfinite(s.xx) || !std::isfinite(s.xy) || !std::isfinite(s.yy) || e.lambda_min < eigen_floor) {
        flag(c, "tensor not symmetric positive definite");
        continue;
      }
      probes.push_back(e.v_max);
    }
    double stretch = 0.0;
    for (const Vec2& p : probes) stretch = std::max(stretch, local.phi(p));
    if (m.kind() == NormKind::CrystallineL1) stretch = std::max(stretch, local.phi({1.0, 1.0}) / std::numbers::sqrt2);
    if (m.kind() == NormKind::Riemannian) probes.pop_back();
    report.alpha = std::max(report.alpha, stretch);

    for (const auto& pr : pairs) {
      const Vec2 xi = pr[0];
      const Vec2 eta = pr[1];
      const double px = local.phi(xi);
      const double pe = local.phi(eta);
      const double scale = std::max({px, pe, 1.0});
      for (double t : {0.0, 0.5, 2.0, 10.0}) {
        if (std::abs(local.phi(t * xi) - t * px) > 1e-12 * scale * std::max(t, 1.0)) {
          flag(c, "phi not positively homogeneous");
        }
      }
      if (local.phi(xi + eta) > px + pe + 1e-12 * scale) flag(c, "triangle inequality violated");
    }
  }
  return report;
}

}  // namespace leastgrad
