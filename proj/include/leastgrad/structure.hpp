#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leastgrad/grid.hpp"
#include "leastgrad/metric.hpp"

namespace leastgrad {

/// Per-cell defect of the alignment condition phi(x, Du) = T . Du.
struct AlignmentReport {
  ScalarGrid residual;  // phi(x, g) - T . g on interior cells, g = Gu
  double weighted_mean = 0.0;
  double min_residual = 0.0;
  /// sum over interior cells of h^2 residual, without exclusions.
  double total_defect = 0.0;
  int cells_counted = 0;
  double grad_threshold = 0.0;
  std::vector<std::string> warnings;
};

/// `u` carries its ghost values in the exterior cells (as the solver returns
/// it). Cells with |g| <= grad_tol * range(f) / diam are left out of the
/// weighted mean; range(f) is taken over the ghost band of u.
AlignmentReport alignment_report(const ScalarGrid& u, const VectorGrid& t, const MetricField& m,
                                 const DomainMask& mask, double grad_tol = 1e-2);

enum class FaceJump { None, Below, Above };  // Below: u < f, Above: u > f

struct BoundaryJumpReport {
  double threshold = 0.0;  // absolute jump threshold
  std::vector<std::size_t> jump_faces;
  std::vector<FaceJump> jump;  // per face
  /// phi(x, nu) - sign(f - u) [T, nu] on jump faces, 0 elsewhere.
  BoundaryField residual;
  BoundaryField trace;  // [T, nu]
  /// Faces where |[T, nu]| < (1 - saturation_tol) phi(x, nu): the trace must attach there.
  std::vector<std::uint8_t> unsaturated;
  int jumps_on_unsaturated = 0;
  double max_jump_residual = 0.0;
  double attainment_fraction = 1.0;
};

/// Default relative jump tolerance 10 h / diam(domain).
double default_jump_tol(const DomainMask& mask);

/// Flags faces with |u_int - f_ext| > jump_tol * range(f) and checks the
/// boundary condition phi(x, nu) = sign(f - u) [T, nu] on them. Expected signs:
/// u < f gives [T, nu] = +phi(x, nu), u > f gives [T, nu] = -phi(x, nu).
BoundaryJumpReport boundary_jump_report(const ScalarGrid& u, const ScalarGrid& f, const VectorGrid& t,
                                        const MetricField& m, const DomainMask& mask,
                                        std::optional<double> jump_tol = std::nullopt,
                                        double saturation_tol = 1e-3);

struct StructureReport {
  AlignmentReport alignment;
  BoundaryJumpReport boundary;
};

/// Sampled argmax over unit p of T . p / phi(x, p); empty when the maximum is
/// below 1 - dir_tol (T is not saturated, so no direction is forced).
std::optional<Vec2> predicted_direction(const Vec2& t_cell, const MetricField& m, int cell, int n_dirs = 360,
                                        double dir_tol = 1e-2);

/// Connected runs of boundary faces, two faces being adjacent when they share a
/// lattice vertex. Components are ordered by their first face.
std::vector<std::vector<std::size_t>> boundary_arcs(const DomainMask& mask, const std::vector<std::size_t>& faces);

enum class ArcVerdict { NonexistenceIndicator, Inconclusive };

const char* to_string(ArcVerdict v);

struct ArcClassification {
  std::vector<std::size_t> faces;
  double measure = 0.0;
  double f_min = 0.0;
  double f_max = 0.0;
  double variation = 0.0;
  ArcVerdict verdict = ArcVerdict::Inconclusive;
};

/// For each connected arc of jump faces, the variation of f along it. A
/// detached arc along which f is not constant rules out a minimiser attaining
/// f that is C^1 near the arc. var_tol is relative to range(f).
std::vector<ArcClassification> nonexistence_diagnostic(const BoundaryJumpReport& report, const ScalarGrid& f,
                                                       const DomainMask& mask, double var_tol = 1e-2);

struct Polyline {
  std::vector<Vec2> points;
  bool closed = false;
};

/// Marching-squares contours of u over squares whose four cell centres are
/// interior. Output order is deterministic.
std::vector<Polyline> level_sets(const ScalarGrid& u, const DomainMask& mask, double level);

}  // namespace leastgrad
