#include "leastgrad/functional.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "leastgrad/errors.hpp"
#include "leastgrad/summation.hpp"

namespace leastgrad {

namespace {

const Vec2 kAxis[2] = {{1.0, 0.0}, {0.0, 1.0}};

void check_shapes(const ScalarGrid& u, const ScalarGrid& f, const MetricField& m, const DomainMask& mask) {
  require_same_geometry(u.geometry(), mask.geometry(), "u vs mask");
  require_same_geometry(f.geometry(), mask.geometry(), "f vs mask");
  require_same_geometry(m.geometry(), mask.geometry(), "metric vs mask");
}

}  // namespace

double face_norm(const MetricField& m, const DomainMask& mask, int host_cell, int axis) {
  const int stride = axis == 0 ? 1 : mask.geometry().nx;
  const int owner = mask.interior(host_cell) ? host_cell : host_cell + stride;
  return m.at(owner).phi(kAxis[axis]);
}

EnergyBreakdown relaxed_energy(const ScalarGrid& u, const ScalarGrid& f, const MetricField& m,
                               const DomainMask& mask) {
  check_shapes(u, f, m, mask);
  const GridGeometry& g = mask.geometry();
  const double h = g.h;
  const VectorGrid grad = gradient(u, f, mask);

  std::vector<double> interior;
  interior.reserve(mask.interior_cells().size());
  for (int c : mask.interior_cells()) {
    Vec2 d = grad[c];
    if (!mask.interior(c + 1)) d.x = 0.0;
    if (!mask.interior(c + g.nx)) d.y = 0.0;
    interior.push_back(h * h * m.at(c).phi(d));
  }
  std::vector<double> penalty;
  penalty.reserve(mask.faces().size());
  for (const BoundaryFace& face : mask.faces()) {
    const double jump = std::abs(f[face.exterior_cell] - u[face.interior_cell]);
    penalty.push_back(face.measure * m.at(face.interior_cell).phi(face.normal) * jump);
  }
  EnergyBreakdown e;
  e.interior_tv = pairwise_sum(interior);
  e.boundary_penalty = pairwise_sum(penalty);
  e.relaxed_total = e.interior_tv + e.boundary_penalty;

  const ScalarGrid density = stencil_energy_density(u, f, m, mask);
  std::vector<double> stencil;
  stencil.reserve(mask.host_cells().size());
  for (int c : mask.host_cells()) stencil.push_back(density[c]);
  e.stencil_total = pairwise_sum(stencil);
  return e;
}

ScalarGrid stencil_energy_density(const ScalarGrid& u, const ScalarGrid& f, const MetricField& m,
                                  const DomainMask& mask) {
  check_shapes(u, f, m, mask);
  const double h2 = mask.geometry().h * mask.geometry().h;
  const VectorGrid grad = gradient(u, f, mask);
  ScalarGrid out(mask.geometry());
  for (int c : mask.host_cells()) {
    if (mask.interior(c)) {
      out[c] = h2 * m.at(c).phi(grad[c]);
    } else {
      double s = 0.0;
      if (mask.x_active(c)) s += std::abs(grad[c].x) * face_norm(m, mask, c, 0);
      if (mask.y_active(c)) s += std::abs(grad[c].y) * face_norm(m, mask, c, 1);
      out[c] = h2 * s;
    }
  }
  return out;
}

double dual_objective(const VectorGrid& v, const ScalarGrid& f, const DomainMask& mask) {
  require_same_geometry(f.geometry(), mask.geometry(), "f vs mask");
  const BoundaryField trace = boundary_trace(v, mask);
  std::vector<double> terms;
  terms.reserve(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const BoundaryFace& face = mask.faces()[k];
    terms.push_back(face.measure * f[face.exterior_cell] * trace[k]);
  }
  return pairwise_sum(terms);
}

double pairing(const VectorGrid& v, const ScalarGrid& u, const ScalarGrid& f, const DomainMask& mask) {
  const VectorGrid grad = gradient(u, f, mask);
  const double h2 = mask.geometry().h * mask.geometry().h;
  std::vector<double> terms;
  terms.reserve(mask.host_cells().size());
  for (int c : mask.host_cells()) terms.push_back(h2 * dot(v[c], grad[c]));
  return pairwise_sum(terms);
}

double divergence_residual(const VectorGrid& v, const DomainMask& mask) {
  const ScalarGrid div = divergence(v, mask);
  double r = 0.0;
  for (int c : mask.interior_cells()) r = std::max(r, std::abs(div[c]));
  return r;
}

double feasibility_residual(const VectorGrid& v, const MetricField& m, const DomainMask& mask) {
  require_same_geometry(v.geometry(), mask.geometry(), "V vs mask");
  double r = 0.0;
  for (int c : mask.host_cells()) {
    if (mask.interior(c)) {
      r = std::max(r, m.at(c).dual(v[c]) - 1.0);
    } else {
      if (mask.x_active(c)) r = std::max(r, std::abs(v[c].x) / face_norm(m, mask, c, 0) - 1.0);
      if (mask.y_active(c)) r = std::max(r, std::abs(v[c].y) / face_norm(m, mask, c, 1) - 1.0);
    }
  }
  return std::max(r, 0.0);
}

std::pair<double, double> boundary_data_range(const ScalarGrid& f, const DomainMask& mask) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const BoundaryFace& face : mask.faces()) {
    lo = std::min(lo, f[face.exterior_cell]);
    hi = std::max(hi, f[face.exterior_cell]);
  }
  return {lo, hi};
}

double certified_dual(const VectorGrid& v, const ScalarGrid& f, const DomainMask& mask) {
  const auto [lo, hi] = boundary_data_range(f, mask);
  const ScalarGrid div = divergence(v, mask);
  const double h2 = mask.geometry().h * mask.geometry().h;
  // L(u, V) = dual_objective - h^2 <u, div V>; minimise over the box.
  std::vector<double> terms;
  terms.reserve(mask.interior_cells().size());
  for (int c : mask.interior_cells()) {
    const double d = div[c];
    terms.push_back(h2 * (d > 0.0 ? hi * d : lo * d));
  }
  return dual_objective(v, f, mask) - pairwise_sum(terms);
}

GapReport duality_gap(const ScalarGrid& u, const ScalarGrid& f, const MetricField& m, const DomainMask& mask,
                      const VectorGrid& v) {
  GapReport r;
  r.energy = relaxed_energy(u, f, m, mask);
  r.primal = r.energy.relaxed_total;
  r.stencil_primal = r.energy.stencil_total;
  r.dual = dual_objective(v, f, mask);
  r.gap = r.primal - r.dual;
  r.certified_dual = certified_dual(v, f, mask);
  r.div_residual = divergence_residual(v, mask);
  r.feas_residual = feasibility_residual(v, m, mask);
  return r;
}

double phi_perimeter(const ScalarGrid& e, const MetricField& m, const DomainMask& mask) {
  for (double x : e.values()) {
    if (x != 0.0 && x != 1.0) throw DomainError("phi_perimeter needs a 0/1 indicator field");
  }
  return relaxed_energy(e, e, m, mask).relaxed_total;
}

}  // namespace leastgrad
