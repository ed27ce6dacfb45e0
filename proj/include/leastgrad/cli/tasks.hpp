#pragma once

#include <filesystem>
#include <optional>

#include "leastgrad/barrier.hpp"
#include "leastgrad/cli/problem.hpp"
#include "leastgrad/report.hpp"
#include "leastgrad/structure.hpp"

namespace leastgrad::cli {

/// Grey-scale PGM (P2) of the field over interior cells, top row first;
/// exterior cells are black.
std::string format_pgm(const ScalarGrid& field, const DomainMask& mask);
/// CSV rows "line,point,x,y,closed,level".
std::string format_contours(const std::vector<std::pair<double, std::vector<Polyline>>>& levels);

struct SolveOutcome {
  BuiltProblem problem;
  SolveResult result;
  AlignmentReport alignment;
  BoundaryJumpReport boundary;
  std::vector<ArcClassification> arcs;
  Json report;
};

/// Structure analysis of a solution: alignment, jump faces, arcs, and the
/// fraction of faces of each direction that jump.
Json structure_json(const BuiltProblem& p, const ScalarGrid& u, const VectorGrid& t, const ProblemSpec& spec,
                    AlignmentReport* alignment = nullptr, BoundaryJumpReport* boundary = nullptr,
                    std::vector<ArcClassification>* arcs = nullptr);

/// Solves from scratch, or continues the checkpoint in `resume_from` for
/// spec.solver.max_iters more iterations.
SolveOutcome run_solve(const ProblemSpec& spec, const std::optional<std::filesystem::path>& resume_from = {});
/// u.csv, T_x.csv, T_y.csv, f.csv, mask.csv, problem.ini, report.json,
/// checkpoint/ and u.pgm.
void write_solve_outputs(const std::filesystem::path& dir, const SolveOutcome& o, const ProblemSpec& spec);

/// Reads the files written by write_solve_outputs.
struct SavedSolution {
  DomainMask mask;
  ScalarGrid u;
  ScalarGrid f;
  VectorGrid T;
};
SavedSolution read_solution(const std::filesystem::path& dir);

Json run_certify(const SavedSolution& s, const ProblemSpec& spec);
Json run_structure(const SavedSolution& s, const ProblemSpec& spec, const std::vector<double>& levels,
                   const std::optional<std::filesystem::path>& out);

struct BarrierOutcome {
  DomainMask mask;
  BarrierReport report;
  BarrierSummary summary;
  Json json;
};
BarrierOutcome run_barrier(const ProblemSpec& spec);
/// barrier.json and barrier_faces.csv.
void write_barrier_outputs(const std::filesystem::path& dir, const BarrierOutcome& o);

/// phi-perimeter of spec.set inside the domain spec.shape.
Json run_perimeter(const ProblemSpec& spec);

struct ImagingOutcome {
  ImagingProblem problem;
  ImagingReport report;
  Json json;
};
ImagingOutcome run_imaging(const ProblemSpec& spec);
/// Stage fields as CSV plus report.json.
void write_imaging_outputs(const std::filesystem::path& dir, const ImagingOutcome& o);

}  // namespace leastgrad::cli
