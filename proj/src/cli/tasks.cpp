#include "leastgrad/cli/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "leastgrad/checkpoint.hpp"
#include "leastgrad/errors.hpp"
#include "leastgrad/field_io.hpp"
#include "leastgrad/functional.hpp"

namespace leastgrad::cli {

namespace fs = std::filesystem;

std::string format_pgm(const ScalarGrid& field, const DomainMask& mask) {
  const GridGeometry& g = field.geometry();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int c : mask.interior_cells()) {
    lo = std::min(lo, field[c]);
    hi = std::max(hi, field[c]);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  std::ostringstream os;
  os << "P2\n" << g.nx << " " << g.ny << "\n255\n";
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.index(i, j);
      const int level = mask.interior(c) ? static_cast<int>(std::lround(255.0 * (field[c] - lo) / span)) : 0;
      os << std::clamp(level, 0, 255) << (i + 1 < g.nx ? " " : "\n");
    }
  }
  return os.str();
}

std::string format_contours(const std::vector<std::pair<double, std::vector<Polyline>>>& levels) {
  std::ostringstream os;
  os << "line,point,x,y,closed,level\n";
  int line = 0;
  for (const auto& [level, lines] : levels) {
    for (const Polyline& pl : lines) {
      for (std::size_t k = 0; k < pl.points.size(); ++k) {
        os << line << "," << k << "," << format_double(pl.points[k].x) << "," << format_double(pl.points[k].y)
           << "," << (pl.closed ? 1 : 0) << "," << format_double(level) << "\n";
      }
      ++line;
    }
  }
  return os.str();
}

Json structure_json(const BuiltProblem& p, const ScalarGrid& u, const VectorGrid& t, const ProblemSpec& spec,
                    AlignmentReport* alignment, BoundaryJumpReport* boundary, std::vector<ArcClassification>* arcs) {
  const AlignmentReport al = alignment_report(u, t, p.metric, p.mask, spec.grad_tol);
  const std::optional<double> jump_tol = spec.jump_tol > 0.0 ? std::optional<double>(spec.jump_tol) : std::nullopt;
  const BoundaryJumpReport bj = boundary_jump_report(u, p.f, t, p.metric, p.mask, jump_tol);
  const auto ar = nonexistence_diagnostic(bj, p.f, p.mask, spec.var_tol);

  Json by_dir = Json::object();
  for (FaceDir d : {FaceDir::East, FaceDir::West, FaceDir::North, FaceDir::South}) {
    std::size_t total = 0, jumped = 0;
    for (std::size_t k = 0; k < p.mask.faces().size(); ++k) {
      if (p.mask.faces()[k].dir != d) continue;
      ++total;
      jumped += bj.jump[k] != FaceJump::None;
    }
    by_dir[to_string(d)] = total ? static_cast<double>(jumped) / static_cast<double>(total) : 0.0;
  }
  Json j = {{"alignment", to_json(al)},
            {"boundary", to_json(bj, p.mask)},
            {"jump_fraction_by_dir", by_dir},
            {"arcs", to_json(ar)}};
  if (alignment) *alignment = al;
  if (boundary) *boundary = bj;
  if (arcs) *arcs = ar;
  return j;
}

SolveOutcome run_solve(const ProblemSpec& spec, const std::optional<fs::path>& resume_from) {
  SolveOutcome o;
  o.problem = build_problem(spec);
  if (resume_from) {
    const SolverState state = load_checkpoint(*resume_from);
    o.result = resume(state, o.problem.f, o.problem.metric, o.problem.mask, spec.solver.max_iters, spec.solver);
  } else {
    o.result = solve_relaxed(o.problem.f, o.problem.metric, o.problem.mask, spec.solver);
  }
  Json structure = structure_json(o.problem, o.result.u, o.result.T, spec, &o.alignment, &o.boundary, &o.arcs);
  o.report = {{"problem",
               {{"shape", spec.shape},
                {"n", spec.n},
                {"data", spec.data},
                {"data_scale", spec.data_scale},
                {"metric", to_string(spec.metric.kind)},
                {"weight", spec.metric.weight}}},
              {"solve", to_json(o.result.report)},
              {"structure", std::move(structure)}};
  return o;
}

void write_solve_outputs(const fs::path& dir, const SolveOutcome& o, const ProblemSpec& spec) {
  fs::create_directories(dir);
  write_field(dir / "u.csv", o.result.u);
  write_field(dir / "T_x.csv", o.result.T.component_x());
  write_field(dir / "T_y.csv", o.result.T.component_y());
  write_field(dir / "f.csv", o.problem.f);
  write_mask(dir / "mask.csv", o.problem.mask);
  write_file_atomic(dir / "problem.ini", format_config(spec));
  write_file_atomic(dir / "report.json", dump(o.report));
  write_file_atomic(dir / "u.pgm", format_pgm(o.result.u, o.problem.mask));
  save_checkpoint(dir / "checkpoint", o.result.state);
}

SavedSolution read_solution(const fs::path& dir) {
  SavedSolution s;
  s.mask = read_mask(dir / "mask.csv");
  s.u = read_field(dir / "u.csv");
  s.f = read_field(dir / "f.csv");
  s.T = VectorGrid::from_components(read_field(dir / "T_x.csv"), read_field(dir / "T_y.csv"));
  require_same_geometry(s.u.geometry(), s.mask.geometry(), "u vs mask");
  require_same_geometry(s.f.geometry(), s.mask.geometry(), "f vs mask");
  require_same_geometry(s.T.geometry(), s.mask.geometry(), "T vs mask");
  return s;
}

namespace {

BuiltProblem from_saved(const SavedSolution& s, const ProblemSpec& spec) {
  BuiltProblem p;
  p.mask = s.mask;
  p.f = s.f;
  p.metric = build_metric(spec.metric, s.mask);
  return p;
}

}  // namespace

Json run_certify(const SavedSolution& s, const ProblemSpec& spec) {
  const BuiltProblem p = from_saved(s, spec);
  const ScalarGrid u = with_ghosts(s.u, s.f, s.mask);
  const GapReport g = duality_gap(u, p.f, p.metric, p.mask, s.T);
  Json j = to_json(g);
  j["relative_gap"] = std::abs(g.gap) / std::max(1.0, std::abs(g.primal));
  return j;
}

Json run_structure(const SavedSolution& s, const ProblemSpec& spec, const std::vector<double>& levels,
                   const std::optional<fs::path>& out) {
  const BuiltProblem p = from_saved(s, spec);
  const ScalarGrid u = with_ghosts(s.u, s.f, s.mask);
  AlignmentReport al;
  Json j = structure_json(p, u, s.T, spec, &al);
  std::vector<std::pair<double, std::vector<Polyline>>> contours;
  for (double level : levels) contours.emplace_back(level, level_sets(u, p.mask, level));
  Json lines = Json::array();
  for (const auto& [level, ls] : contours) lines.push_back({{"level", level}, {"polylines", ls.size()}});
  j["contours"] = lines;
  if (out) {
    fs::create_directories(*out);
    write_file_atomic(*out / "structure.json", dump(j));
    write_file_atomic(*out / "contours.csv", format_contours(contours));
    write_file_atomic(*out / "alignment.pgm", format_pgm(al.residual, p.mask));
  }
  return j;
}

BarrierOutcome run_barrier(const ProblemSpec& spec) {
  validate(spec);
  BarrierOutcome o;
  const Shape shape = parse_shape(spec.shape);
  o.mask = build_mask(shape, spec.n);
  const MetricField m = build_metric(spec.metric, o.mask);
  const ScalarGrid d =
      spec.distance_from_mask ? signed_distance_field(o.mask) : signed_distance_field(shape, o.mask.geometry());
  const double h = o.mask.geometry().h;
  o.report = barrier_indicator(m, d, o.mask, spec.band_cells * h, spec.delta_cells * h);
  o.summary = classify(o.report, o.mask);
  o.json = to_json(o.report, o.summary);
  o.json["problem"] = {{"shape", spec.shape}, {"n", spec.n}, {"metric", to_string(spec.metric.kind)}};
  return o;
}

void write_barrier_outputs(const fs::path& dir, const BarrierOutcome& o) {
  fs::create_directories(dir);
  write_file_atomic(dir / "barrier.json", dump(o.json));
  std::ostringstream os;
  os << "face,x,y,nx,ny,S,class\n";
  const GridGeometry& g = o.mask.geometry();
  for (std::size_t k = 0; k < o.mask.faces().size(); ++k) {
    const BoundaryFace& f = o.mask.faces()[k];
    const Vec2 c = g.center(f.interior_cell) + 0.5 * g.h * f.normal;
    os << k << "," << format_double(c.x) << "," << format_double(c.y) << "," << f.normal.x << "," << f.normal.y
       << "," << format_double(o.report.S[k]) << "," << to_string(o.report.classes[k]) << "\n";
  }
  write_file_atomic(dir / "barrier_faces.csv", os.str());
}

Json run_perimeter(const ProblemSpec& spec) {
  validate(spec);
  const Shape domain = parse_shape(spec.shape);
  const Shape set = parse_shape(spec.set);
  const DomainMask mask = build_mask(domain, spec.n);
  const MetricField m = build_metric(spec.metric, mask);
  const ScalarGrid e = indicator(set, mask.geometry());
  return {{"domain", spec.shape},
          {"set", spec.set},
          {"n", spec.n},
          {"metric", to_string(spec.metric.kind)},
          {"perimeter", phi_perimeter(e, m, mask)}};
}

ImagingOutcome run_imaging(const ProblemSpec& spec) {
  validate(spec);
  const Shape shape = parse_shape(spec.shape);
  const Phantom phantom = parse_phantom(spec.phantom);
  const double scale = spec.data_scale;
  const std::string data = spec.data;
  // Imaging data must be defined off the grid for the refined forward solve,
  // so only the analytic linear ids are accepted here.
  if (data != "linear-x" && data != "linear-y") throw DomainError("imaging supports linear-x or linear-y data");
  const auto f = [scale, data](const Vec2& p) { return scale * (data == "linear-x" ? p.x : p.y); };
  ImagingOutcome o;
  o.problem = make_problem(phantom, shape, spec.n, f);
  if (spec.metric.kind == NormKind::Riemannian) {
    o.problem.sigma0 = build_metric(spec.metric, o.problem.mask).tensors();
  }
  if (spec.refine_forward) {
    if (!o.problem.sigma0.empty()) throw DomainError("refined forward solve supports sigma0 = I only");
    o.report = run_pipeline(o.problem, forward_solve_refined(phantom, shape, spec.n, f, spec.forward_tol), spec.solver);
  } else {
    o.report = run_pipeline(o.problem, spec.solver, spec.forward_tol);
  }
  o.json = to_json(o.report);
  o.json["problem"] = {{"shape", spec.shape},
                       {"n", spec.n},
                       {"phantom", spec.phantom},
                       {"data", spec.data},
                       {"data_scale", spec.data_scale},
                       {"refine_forward", spec.refine_forward}};
  return o;
}

void write_imaging_outputs(const fs::path& dir, const ImagingOutcome& o) {
  fs::create_directories(dir);
  const ImagingReport& r = o.report;
  write_field(dir / "c_true.csv", o.problem.c_true);
  write_field(dir / "u_forward.csv", r.forward.u);
  write_field(dir / "J_x.csv", r.forward.J.component_x());
  write_field(dir / "J_y.csv", r.forward.J.component_y());
  write_field(dir / "a.csv", r.a);
  write_field(dir / "u_recovered.csv", r.inversion.u);
  write_field(dir / "c_recovered.csv", r.recovery.c);
  write_mask(dir / "mask.csv", o.problem.mask);
  write_file_atomic(dir / "report.json", dump(o.json));
  write_file_atomic(dir / "c_recovered.pgm", format_pgm(r.recovery.c, o.problem.mask));
}

}  // namespace leastgrad::cli
