#pragma once

#include <functional>
#include <string>
#include <vector>

#include "leastgrad/grid.hpp"
#include "leastgrad/metric.hpp"
#include "leastgrad/shapes.hpp"
#include "leastgrad/solver.hpp"

namespace leastgrad {

enum class PhantomKind { Constant, Layered, GaussianBump };

const char* to_string(PhantomKind k);
PhantomKind parse_phantom_kind(std::string_view text);

/// Conformal factor c(x) of a synthetic conductivity sigma = c sigma0.
///   Constant      c = base
///   Layered       c = base + amplitude * y
///   GaussianBump  c = base + amplitude * exp(-|x - center|^2 / width)
struct Phantom {
  PhantomKind kind = PhantomKind::Constant;
  double base = 1.0;
  double amplitude = 0.5;
  Vec2 center{0.5, 0.5};
  double width = 0.04;

  double operator()(const Vec2& p) const;
};

struct ImagingProblem {
  ScalarGrid c_true;
  /// One tensor per cell; empty means the identity everywhere.
  std::vector<Sym2> sigma0;
  ScalarGrid f;
  DomainMask mask;
};

/// Samples c and f on the grid of build_mask(shape, n).
ImagingProblem make_problem(const Phantom& phantom, const Shape& shape, int n,
                            const std::function<double(const Vec2&)>& f);

struct ForwardResult {
  ScalarGrid u;  // exterior cells hold f
  VectorGrid J;  // -sigma grad_h u on interior cells, centred differences
  long cg_iterations = 0;
  double cg_residual = 0.0;
  /// Sum of the discrete outward fluxes over boundary faces and the sum of
  /// their magnitudes; the first vanishes for a discretely div-free current.
  double flux_sum = 0.0;
  double flux_scale = 0.0;
};

/// Solves div(sigma grad u) = 0 with u = f on the ghost cells: 5-point scheme,
/// face conductivities the harmonic mean of the two cells' normal components
/// sigma_xx or sigma_yy, conjugate gradients to relative residual `tol`.
/// Throws DomainError for tol <= 0 and NumericalError if CG does not reach it.
ForwardResult forward_solve(const ImagingProblem& p, double tol = 1e-10);

/// Forward solve on the grid refined by 2 in each direction (same origin),
/// with J restricted back by averaging the four children. Used to gauge the
/// effect of generating and inverting the data on the same grid.
ForwardResult forward_solve_refined(const Phantom& phantom, const Shape& shape, int n,
                                    const std::function<double(const Vec2&)>& f, double tol = 1e-10);

/// a = sqrt(J^T sigma0^{-1} J) on every cell.
ScalarGrid weight_from_current(const VectorGrid& j, const std::vector<Sym2>& sigma0);

struct Recovery {
  ScalarGrid c;
  std::vector<std::uint8_t> excluded;  // per cell; exterior cells are always excluded
  double grad_floor = 0.0;
  double excluded_fraction = 0.0;  // over interior cells
};

/// Default grad_floor: 1e-3 range(f) / diam(domain), with f read from the
/// ghost band of u_rec.
double default_grad_floor(const ScalarGrid& u_rec, const DomainMask& mask);

/// c = a / sqrt(grad u^T sigma0 grad u) with centred differences, on interior
/// cells whose denominator reaches grad_floor.
Recovery recover_conductivity(const ScalarGrid& u_rec, const ScalarGrid& a, const std::vector<Sym2>& sigma0,
                              const DomainMask& mask, std::optional<double> grad_floor = std::nullopt);

/// Riemannian metric built from a and sigma0. Weights on interior cells are
/// floored at `weight_floor` so the metric stays a norm where J vanishes.
MetricField imaging_metric(const ScalarGrid& a, const std::vector<Sym2>& sigma0, const DomainMask& mask,
                           double weight_floor = kDefaultWeightFloor);

/// sqrt(sum (x - y)^2 / sum y^2) over interior cells not excluded.
double relative_l2_error(const ScalarGrid& x, const ScalarGrid& reference, const DomainMask& mask,
                         const std::vector<std::uint8_t>& excluded);

struct ImagingReport {
  ForwardResult forward;
  ScalarGrid a;
  SolveResult inversion;
  Recovery recovery;
  double rel_l2_error_c = 0.0;
  double rel_l2_error_u = 0.0;
  /// Weighted mean alignment defect of the recovered u against T.
  double alignment = 0.0;
};

/// forward_solve -> weight_from_current -> solve_relaxed -> recover_conductivity.
ImagingReport run_pipeline(const ImagingProblem& p, const SolverOptions& opts = {}, double forward_tol = 1e-10);

/// Same pipeline with an externally supplied forward result.
ImagingReport run_pipeline(const ImagingProblem& p, ForwardResult forward, const SolverOptions& opts = {});

}  // namespace leastgrad
