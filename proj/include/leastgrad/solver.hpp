#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "leastgrad/functional.hpp"
#include "leastgrad/grid.hpp"
#include "leastgrad/metric.hpp"

namespace leastgrad {

struct SolverOptions {
  long max_iters = 200000;
  /// Relative gap tolerance: |gap| <= tol_gap * max(1, |primal|).
  double tol_gap = 1e-3;
  /// Bound on max |div T| over interior cells.
  double tol_div = 1e-6;
  /// Step sizes; both default to h / sqrt(8) so that tau sigma ||G||^2 <= 1.
  std::optional<double> tau;
  std::optional<double> sigma;
  long check_every = 100;
  /// Random interior start in [min f, max f] instead of the ghost extension.
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

struct GapSample {
  long iteration = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double div_residual = 0.0;
};

/// Snapshot of a solve. `gap` is relaxed_total - dual; `stencil_gap` uses the
/// energy the iteration actually minimises and drives the stopping test.
struct SolveReport {
  long iterations = 0;
  std::vector<GapSample> history;
  EnergyBreakdown energy;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double stencil_gap = 0.0;
  double relative_gap = 0.0;
  double certified_dual = 0.0;
  double div_residual = 0.0;
  double feas_residual = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  bool converged = false;
  double wall_seconds = 0.0;
};

/// Everything needed to continue an iteration bit-exactly.
struct SolverState {
  ScalarGrid u;      // exterior cells hold f
  ScalarGrid u_bar;  // extrapolated iterate
  VectorGrid v;
  long iteration = 0;
  bool converged = false;
  double tau = 0.0;
  double sigma = 0.0;
  std::vector<std::uint8_t> mask_flags;
  std::vector<GapSample> history;
};

struct SolveResult {
  ScalarGrid u;
  VectorGrid T;
  SolveReport report;
  SolverState state;
};

/// ||G||^2 <= 8 / h^2 for the forward-difference gradient.
double operator_norm_sq_bound(double h);

/// Primal-dual iteration for min over u (ghosts pinned to f) of the stencil
/// energy, in saddle form max over pointwise dual-feasible V of h^2 <V, Gu>:
///   V <- P(V + sigma G u_bar),  u <- u + tau div V,  u_bar <- 2 u_new - u_old.
/// Returns the last iterate; converged=false at max_iters is not an error.
/// Throws NumericalError if the iterate stops being finite.
SolveResult solve_relaxed(const ScalarGrid& f, const MetricField& m, const DomainMask& mask,
                          const SolverOptions& opts = {});

/// Continues `state` for up to `extra_iters` more iterations with the same
/// problem. Throws DomainError if the grid or mask differs from the state's.
SolveResult resume(const SolverState& state, const ScalarGrid& f, const MetricField& m, const DomainMask& mask,
                   long extra_iters, const SolverOptions& opts = {});

}  // namespace leastgrad
