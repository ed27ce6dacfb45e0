#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "leastgrad/grid.hpp"
#include "leastgrad/imaging.hpp"
#include "leastgrad/metric.hpp"
#include "leastgrad/shapes.hpp"
#include "leastgrad/solver.hpp"

namespace leastgrad::cli {

/// Metric block of a problem.
///   weight: "1.5", "constant:1.5", "layered:base,amp", "bump:base,amp,cx,cy,width", "file:a.csv"
///   tensor: "xx,xy,yy" or "file:xx.csv;xy.csv;yy.csv" (Riemannian only)
struct MetricSpec {
  NormKind kind = NormKind::IsotropicEuclidean;
  std::string weight = "1";
  std::string tensor = "1,0,1";
};

/// Everything a subcommand needs. Boundary data ids: linear-x, linear-y,
/// top-edge, top-edge-tilted[:slope], file:path; the values are multiplied by
/// data_scale.
struct ProblemSpec {
  std::string shape = "disk:1";
  int n = 64;
  MetricSpec metric;
  std::string data = "linear-x";
  double data_scale = 1.0;
  /// Set E for the perimeter command.
  std::string set = "box:0.5,1";
  /// Imaging phantom: "constant[:base]", "layered[:base,amp]", "bump[:base,amp,cx,cy,width]".
  std::string phantom = "constant";
  bool refine_forward = false;
  double forward_tol = 1e-10;
  /// Barrier band and threshold in units of h.
  double band_cells = 4.0;
  double delta_cells = 10.0;
  bool distance_from_mask = false;
  /// Structure tolerances; jump_tol <= 0 selects the default 10h/diam.
  double jump_tol = 0.0;
  double grad_tol = 1e-2;
  double var_tol = 1e-2;
  SolverOptions solver;
  std::filesystem::path out = "out";
};

/// Reads an INI file with sections [problem], [metric], [solver], [barrier],
/// [structure], [imaging] and [output]. Unknown keys are errors. Throws
/// DomainError when the file is missing or malformed.
ProblemSpec load_config(const std::filesystem::path& path, ProblemSpec base = {});
std::string format_config(const ProblemSpec& spec);

/// Checks n >= 8 and that referenced files exist.
void validate(const ProblemSpec& spec);

struct BuiltProblem {
  Shape shape;
  DomainMask mask;
  ScalarGrid f;
  MetricField metric;
};

BuiltProblem build_problem(const ProblemSpec& spec);
MetricField build_metric(const MetricSpec& spec, const DomainMask& mask);
ScalarGrid build_data(const std::string& spec, double scale, const Shape& shape, const GridGeometry& g);
Phantom parse_phantom(const std::string& spec);

}  // namespace leastgrad::cli
