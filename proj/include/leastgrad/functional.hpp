#pragma once

#include "leastgrad/grid.hpp"
#include "leastgrad/metric.hpp"

namespace leastgrad {

/// The relaxed functional split into its interior and boundary parts.
///
/// interior_tv sums h^2 phi(x, g) over interior cells, where g is the forward
/// difference with every component that crosses the boundary removed.
/// boundary_penalty sums h phi(x, nu) |f_ext - u_int| over boundary faces.
/// stencil_total is the energy the solver minimises: h^2 phi(x, Gu) with the
/// full ghost stencil on interior cells, plus the west/south face terms. The
/// two totals agree except on interior cells whose stencil mixes an interior
/// difference with a boundary-crossing one; there stencil_total <= relaxed_total
/// by the triangle inequality, with equality for the l1 kind.
struct EnergyBreakdown {
  double interior_tv = 0.0;
  double boundary_penalty = 0.0;
  double relaxed_total = 0.0;
  double stencil_total = 0.0;
};

EnergyBreakdown relaxed_energy(const ScalarGrid& u, const ScalarGrid& f, const MetricField& m,
                               const DomainMask& mask);

/// Per-cell h^2 phi(x, Gu) on host cells (exterior hosts use the face norms);
/// sums to stencil_total.
ScalarGrid stencil_energy_density(const ScalarGrid& u, const ScalarGrid& f, const MetricField& m,
                                  const DomainMask& mask);

/// sum_faces h f_ext [V, nu].
double dual_objective(const VectorGrid& v, const ScalarGrid& f, const DomainMask& mask);

/// h^2 <V, Gu> over host cells.
double pairing(const VectorGrid& v, const ScalarGrid& u, const ScalarGrid& f, const DomainMask& mask);

/// max |div V| over interior cells.
double divergence_residual(const VectorGrid& v, const DomainMask& mask);

/// Largest violation of pointwise dual feasibility: (phi^0(x, V) - 1)^+ on
/// interior cells and (|V_k| / phi(x_adj, e_k) - 1)^+ on active components of
/// exterior host cells.
double feasibility_residual(const VectorGrid& v, const MetricField& m, const DomainMask& mask);

/// Lower bound on the relaxed minimum that stays valid when div V != 0:
/// dual_objective minus the worst case of h^2 <u, div V> over u in [min f, max f].
double certified_dual(const VectorGrid& v, const ScalarGrid& f, const DomainMask& mask);

struct GapReport {
  double primal = 0.0;  // relaxed_total
  double stencil_primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;  // primal - dual
  double certified_dual = 0.0;
  double div_residual = 0.0;
  double feas_residual = 0.0;
  EnergyBreakdown energy;
};

GapReport duality_gap(const ScalarGrid& u, const ScalarGrid& f, const MetricField& m, const DomainMask& mask,
                      const VectorGrid& v);

/// phi-perimeter of a 0/1 field E: the relaxed total of E with E's own
/// exterior values as boundary data, so jumps across the domain boundary count.
/// Throws DomainError when E is not binary.
double phi_perimeter(const ScalarGrid& e, const MetricField& m, const DomainMask& mask);

/// Face-norm phi(x_adj, e_k) used for the exterior component of a host cell:
/// the interior neighbour across the face supplies the metric.
double face_norm(const MetricField& m, const DomainMask& mask, int host_cell, int axis);

/// min / max of f over the exterior cells of the boundary faces.
std::pair<double, double> boundary_data_range(const ScalarGrid& f, const DomainMask& mask);

}  // namespace leastgrad
