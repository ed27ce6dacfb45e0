#include "leastgrad/cli/gallery.hpp"

#include <numbers>

#include "leastgrad/cli/tasks.hpp"
#include "leastgrad/errors.hpp"
#include "leastgrad/field_io.hpp"

namespace leastgrad::cli {

const char* to_string(Task t) {
  switch (t) {
    case Task::Solve:
      return "solve";
    case Task::Barrier:
      return "barrier";
    case Task::Perimeter:
      return "perimeter";
    case Task::Imaging:
      return "imaging";
  }
  return "?";
}

const char* to_string(Provenance p) { return p == Provenance::ByInspection ? "by-inspection" : "derived"; }

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Provenance kInspect = Provenance::ByInspection;
constexpr Provenance kDerived = Provenance::Derived;

ProblemSpec base(std::string shape, int n) {
  ProblemSpec s;
  s.shape = std::move(shape);
  s.n = n;
  return s;
}

std::vector<GalleryEntry> make_gallery() {
  std::vector<GalleryEntry> g;

  {
    GalleryEntry e{"disk-linear", "unit disk, f = x, Euclidean norm", Task::Solve, base("disk:0,0,1", 128), {}};
    e.spec.data = "linear-x";
    e.expected = {
        {"/solve/primal", 0.99 * kPi, 1.01 * kPi, kDerived,
         "u = x attains f and is a minimiser (T = e1 certifies it); its energy is the disk area pi"},
        {"/solve/relative_gap", 0.0, 1e-3, kDerived, "solver stopping tolerance"},
        {"/solve/div_residual", 0.0, 1e-6, kDerived, "solver stopping tolerance"},
        {"/structure/boundary/attainment_fraction", 1.0, 1.0, kDerived, "u = x attains its trace, no jump faces"},
        {"/structure/alignment/weighted_mean_alignment", 0.0, 1e-2, kDerived,
         "bounded by the relative duality gap at convergence"},
    };
    g.push_back(std::move(e));
  }
  {
    GalleryEntry e{"square-top", "unit square, f = 1 above the top edge and 0 elsewhere", Task::Solve,
                   base("box:1,1,0,0", 64), {}};
    e.spec.data = "top-edge";
    e.expected = {
        {"/solve/primal", 0.98, 1.02, kDerived,
         "u = 0 pays the top-edge penalty 1; every level set of a competitor must separate the top edge from "
         "the other three sides, which costs at least the top-edge length 1"},
        {"/structure/jump_fraction_by_dir/north", 0.9, 1.0, kDerived, "the minimiser detaches along the top edge"},
        {"/structure/jump_fraction_by_dir/south", 0.0, 0.05, kDerived, "u = f = 0 near the bottom edge"},
        {"/structure/jump_fraction_by_dir/east", 0.0, 0.05, kDerived, "u = f = 0 near the sides"},
        {"/structure/jump_fraction_by_dir/west", 0.0, 0.05, kDerived, "u = f = 0 near the sides"},
        {"/structure/boundary/max_jump_residual", 0.0, 5e-2, kDerived,
         "T = (0, 1) gives residual 0 on the top edge; the computed T approximates it"},
        {"/structure/alignment/weighted_mean_alignment", 0.0, 1e-2, kDerived,
         "bounded by the relative duality gap at convergence"},
    };
    g.push_back(std::move(e));
  }
  {
    GalleryEntry e{"square-top-tilted", "unit square, f = 1 + 0.2 x above the top edge, 0 elsewhere", Task::Solve,
                   base("box:1,1,0,0", 64), {}};
    e.spec.data = "top-edge-tilted:0.2";
    e.expected = {
        {"/solve/primal", 1.1 * 0.98, 1.1 * 1.02, kDerived,
         "coarea: each level t < 1 costs the top-edge length 1, each t in (1, 1.2) the length of {f > t}; "
         "the integral is the mean of f on the top edge, 1.1"},
        {"/structure/jump_fraction_by_dir/north", 0.9, 1.0, kDerived, "detachment along the whole top edge"},
        {"/structure/arcs/0/variation", 0.19, 0.21, kDerived, "f ranges over [1, 1.2] on the top edge"},
    };
    g.push_back(std::move(e));
  }
  {
    GalleryEntry e{"annulus", "annulus 0.5 < r < 1, Euclidean norm: sufficient condition on each circle",
                   Task::Barrier, base("annulus:0,0,0.5,1", 128), {}};
    e.expected = {
        {"/components/0/pass_fraction", 1.0, 1.0, kDerived, "outer circle: d = 1 - r, S = 1/r = 1 > 0"},
        {"/components/0/mean_S", 0.95, 1.05, kDerived, "outer circle curvature 1/R = 1"},
        {"/components/1/fail_fraction", 1.0, 1.0, kDerived, "inner circle: d = r - 0.5, S = -1/r = -2 < 0"},
        {"/components/1/mean_S", -2.1, -1.9, kDerived, "inner circle curvature -1/R = -2"},
    };
    g.push_back(std::move(e));
  }
  {
    GalleryEntry e{"disk-barrier", "unit disk, Euclidean norm", Task::Barrier, base("disk:0,0,1", 128), {}};
    e.expected = {
        {"/pass_fraction", 1.0, 1.0, kDerived, "d = 1 - r, S = 1/r > 0 on the whole circle"},
        {"/components/0/mean_S", 0.95, 1.05, kDerived, "circle curvature 1/R = 1"},
    };
    g.push_back(std::move(e));
  }
  {
    GalleryEntry e{"half-square-perimeter", "perimeter of the lower half of the unit square, Euclidean norm",
                   Task::Perimeter, base("box:1,1,0,0", 64), {}};
    e.spec.set = "box:1,0.5,0,0";
    e.expected = {
        {"/perimeter", 3.0 - 1e-12, 3.0 + 1e-12, kInspect, "sides 1 + 0.5 + 0.5 + 1, all on grid lines"},
    };
    g.push_back(std::move(e));
  }
  {
    GalleryEntry e{"imaging-const", "conductivity imaging, c = 1, f = x on the unit square", Task::Imaging,
                   base("box:1,1,0,0", 64), {}};
    e.spec.phantom = "constant:1";
    e.expected = {
        {"/rel_l2_error_c", 0.0, 1e-2, kDerived, "u = x is exact for the scheme, so a = 1 and c = 1 up to the gap"},
    };
    g.push_back(std::move(e));
  }
  {
    GalleryEntry e{"imaging-layered", "conductivity imaging, c = 1 + 0.5 y, f = x", Task::Imaging,
                   base("box:1,1,0,0", 64), {}};
    e.spec.phantom = "layered:1,0.5";
    e.expected = {
        {"/rel_l2_error_c", 0.0, 5e-2, kDerived, "div(c(y) e1) = 0, so u = x and J = -c(y) e1 exactly"},
    };
    g.push_back(std::move(e));
  }
  {
    GalleryEntry e{"imaging-bump", "conductivity imaging, Gaussian bump c = 1 + 0.5 exp(-|x - x0|^2 / 0.04)",
                   Task::Imaging, base("box:1,1,0,0", 64), {}};
    e.spec.phantom = "bump:1,0.5,0.5,0.5,0.04";
    e.expected = {
        {"/rel_l2_error_c", 0.0, 1e-2, kDerived,
         "regression anchor from the refinement study at n = 32, 64, 128 (errors 1.7e-2, 6.2e-3, 3.0e-3)"},
    };
    g.push_back(std::move(e));
  }
  return g;
}

}  // namespace

const std::vector<GalleryEntry>& gallery() {
  static const std::vector<GalleryEntry> entries = make_gallery();
  return entries;
}

const GalleryEntry& gallery_entry(const std::string& id) {
  for (const auto& e : gallery()) {
    if (e.id == id) return e;
  }
  throw DomainError("unknown gallery id '" + id + "'");
}

GalleryOutcome gallery_run(const GalleryEntry& entry, const std::optional<std::filesystem::path>& out) {
  GalleryOutcome o;
  switch (entry.task) {
    case Task::Solve: {
      const SolveOutcome s = run_solve(entry.spec);
      o.report = s.report;
      if (out) write_solve_outputs(*out, s, entry.spec);
      break;
    }
    case Task::Barrier: {
      const BarrierOutcome b = run_barrier(entry.spec);
      o.report = b.json;
      if (out) write_barrier_outputs(*out, b);
      break;
    }
    case Task::Perimeter:
      o.report = run_perimeter(entry.spec);
      break;
    case Task::Imaging: {
      const ImagingOutcome im = run_imaging(entry.spec);
      o.report = im.json;
      if (out) write_imaging_outputs(*out, im);
      break;
    }
  }
  Json checks = Json::array();
  for (const Expectation& e : entry.expected) {
    CheckResult c{&e, std::numeric_limits<double>::quiet_NaN(), false};
    const Json::json_pointer ptr(e.pointer);
    if (o.report.contains(ptr) && o.report.at(ptr).is_number()) {
      c.value = o.report.at(ptr).get<double>();
      c.passed = c.value >= e.lo && c.value <= e.hi;
    }
    o.passed = o.passed && c.passed;
    checks.push_back({{"quantity", e.pointer},
                      {"value", c.value},
                      {"lo", e.lo},
                      {"hi", e.hi},
                      {"provenance", to_string(e.provenance)},
                      {"note", e.note},
                      {"passed", c.passed}});
    o.checks.push_back(c);
  }
  o.report["gallery"] = {{"id", entry.id}, {"passed", o.passed}, {"checks", checks}};
  if (out) write_file_atomic(*out / "report.json", dump(o.report));
  return o;
}

}  // namespace leastgrad::cli
