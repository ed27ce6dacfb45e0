#include "leastgrad/cli/app.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <iomanip>

#include "leastgrad/cli/gallery.hpp"
#include "leastgrad/cli/tasks.hpp"
#include "leastgrad/errors.hpp"
#include "leastgrad/field_io.hpp"

namespace leastgrad::cli {

namespace fs = std::filesystem;

namespace {

int threads_from_env() {
  const char* v = std::getenv("LG_THREADS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) throw DomainError("LG_THREADS must be a positive integer");
  return static_cast<int>(n);
}

// Flags shared by the problem-building subcommands. Each stays unset unless
// given, so that values from --config or a gallery entry survive.
struct ProblemFlags {
  std::optional<std::string> config, gallery, shape, data, set, weight, tensor, kind, phantom, out;
  std::optional<int> n;
  std::optional<double> data_scale, tol_gap, tol_div, tau, sigma, band, delta, jump_tol, grad_tol, var_tol;
  std::optional<long> max_iters, check_every;
  std::optional<std::uint64_t> seed;
  bool from_mask = false;
  bool refine_forward = false;

  void add_problem(CLI::App* app) {
    app->add_option("--config", config, "INI config file");
    app->add_option("--gallery", gallery, "start from a gallery entry");
    app->add_option("--shape", shape, "domain, e.g. disk:0,0,1 or box:1,1");
    app->add_option("--n", n, "cells per unit length");
    app->add_option("--out", out, "output directory");
  }
  void add_metric(CLI::App* app) {
    app->add_option("--metric-kind", kind, "isotropic | riemannian | l1 | linf");
    app->add_option("--weight", weight, "weight a(x): number, layered:..., bump:..., file:path");
    app->add_option("--tensor", tensor, "sigma0: xx,xy,yy or file:xx.csv;xy.csv;yy.csv");
  }
  void add_data(CLI::App* app) {
    app->add_option("--data", data, "linear-x | linear-y | top-edge | top-edge-tilted[:slope] | file:path");
    app->add_option("--data-scale", data_scale, "multiplier for the boundary data");
  }
  void add_solver(CLI::App* app) {
    app->add_option("--max-iters", max_iters, "iteration budget (extra iterations with --resume)");
    app->add_option("--tol-gap", tol_gap, "relative duality gap tolerance");
    app->add_option("--tol-div", tol_div, "max |div T| tolerance");
    app->add_option("--tau", tau, "primal step");
    app->add_option("--sigma", sigma, "dual step");
    app->add_option("--check-every", check_every, "iterations between gap evaluations");
    app->add_option("--seed", seed, "random interior start");
  }
  void add_structure(CLI::App* app) {
    app->add_option("--jump-tol", jump_tol, "relative jump tolerance (default 10h/diam)");
    app->add_option("--grad-tol", grad_tol, "relative gradient floor for the alignment mean");
    app->add_option("--var-tol", var_tol, "relative variation of f along an arc");
  }
  void add_barrier(CLI::App* app) {
    app->add_option("--band", band, "band width in cells");
    app->add_option("--delta", delta, "classification threshold in cells");
    app->add_flag("--from-mask", from_mask, "fast-sweeping distance from the mask instead of the exact one");
  }
  void add_imaging(CLI::App* app) {
    app->add_option("--phantom", phantom, "constant[:c] | layered[:base,amp] | bump[:base,amp,cx,cy,width]");
    app->add_flag("--refine-forward", refine_forward, "forward solve on the 2x refined grid");
  }

  ProblemSpec resolve() const {
    ProblemSpec s;
    if (gallery) s = gallery_entry(*gallery).spec;
    if (config) s = load_config(*config, s);
    if (shape) s.shape = *shape;
    if (n) s.n = *n;
    if (data) s.data = *data;
    if (data_scale) s.data_scale = *data_scale;
    if (set) s.set = *set;
    if (kind) s.metric.kind = parse_norm_kind(*kind);
    if (weight) s.metric.weight = *weight;
    if (tensor) s.metric.tensor = *tensor;
    if (phantom) s.phantom = *phantom;
    if (refine_forward) s.refine_forward = true;
    if (max_iters) s.solver.max_iters = *max_iters;
    if (tol_gap) s.solver.tol_gap = *tol_gap;
    if (tol_div) s.solver.tol_div = *tol_div;
    if (tau) s.solver.tau = *tau;
    if (sigma) s.solver.sigma = *sigma;
    if (check_every) s.solver.check_every = *check_every;
    if (seed) s.solver.seed = *seed;
    if (band) s.band_cells = *band;
    if (delta) s.delta_cells = *delta;
    if (from_mask) s.distance_from_mask = true;
    if (jump_tol) s.jump_tol = *jump_tol;
    if (grad_tol) s.grad_tol = *grad_tol;
    if (var_tol) s.var_tol = *var_tol;
    if (out) s.out = *out;
    s.solver.threads = threads_from_env();
    validate(s);
    return s;
  }
};

void print_summary(std::ostream& out, const char* label, double v) {
  out << std::left << std::setw(22) << label << std::setprecision(10) << v << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least gradient problems with inhomogeneous anisotropic norms", "leastgrad"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  ProblemFlags pf;
  std::optional<std::string> resume_dir, solution_dir;
  std::vector<double> levels;

  CLI::App* solve = app.add_subcommand("solve", "minimise the relaxed functional and write u, T and report.json");
  pf.add_problem(solve);
  pf.add_metric(solve);
  pf.add_data(solve);
  pf.add_solver(solve);
  pf.add_structure(solve);
  solve->add_option("--resume", resume_dir, "continue from a checkpoint directory");

  CLI::App* certify = app.add_subcommand("certify", "re-evaluate energies and the duality gap of a saved solution");
  certify->add_option("--dir", solution_dir, "output directory of a solve run")->required();
  certify->add_option("--config", pf.config, "INI config (defaults to DIR/problem.ini)");
  pf.add_metric(certify);

  CLI::App* structure = app.add_subcommand("structure", "alignment, boundary jumps and contours of a saved solution");
  structure->add_option("--dir", solution_dir, "output directory of a solve run")->required();
  structure->add_option("--config", pf.config, "INI config (defaults to DIR/problem.ini)");
  structure->add_option("--levels", levels, "contour levels, comma separated")->delimiter(',');
  structure->add_option("--out", pf.out, "output directory (defaults to DIR)");
  pf.add_metric(structure);
  pf.add_structure(structure);

  CLI::App* barrier = app.add_subcommand("barrier", "evaluate the barrier sufficient condition near the boundary");
  pf.add_problem(barrier);
  pf.add_metric(barrier);
  pf.add_barrier(barrier);

  CLI::App* perimeter = app.add_subcommand("perimeter", "phi-perimeter of a set inside the domain");
  pf.add_problem(perimeter);
  pf.add_metric(perimeter);
  perimeter->add_option("--set", pf.set, "the set E, same syntax as --shape");

  CLI::App* imaging = app.add_subcommand("imaging", "conductivity imaging round trip on a phantom");
  pf.add_problem(imaging);
  pf.add_imaging(imaging);
  pf.add_data(imaging);
  pf.add_solver(imaging);
  imaging->add_option("--tensor", pf.tensor, "sigma0: xx,xy,yy");

  CLI::App* gal = app.add_subcommand("gallery", "built-in problems with expected values");
  gal->require_subcommand(1);
  gal->add_subcommand("list", "list gallery entries");
  std::string gallery_id;
  std::optional<std::string> gallery_out;
  CLI::App* gal_run = gal->add_subcommand("run", "run an entry and compare with its expected values");
  gal_run->add_option("id", gallery_id, "entry id")->required();
  gal_run->add_option("--out", gallery_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kValidationError;
  }

  try {
    if (*solve) {
      const ProblemSpec spec = pf.resolve();
      std::optional<fs::path> from;
      if (resume_dir) from = fs::path(*resume_dir);
      const SolveOutcome o = run_solve(spec, from);
      write_solve_outputs(spec.out, o, spec);
      const SolveReport& r = o.result.report;
      print_summary(out, "iterations", static_cast<double>(r.iterations));
      print_summary(out, "primal", r.primal);
      print_summary(out, "dual", r.dual);
      print_summary(out, "relative_gap", r.relative_gap);
      print_summary(out, "div_residual", r.div_residual);
      print_summary(out, "attainment_fraction", o.boundary.attainment_fraction);
      out << "wrote " << spec.out.string() << "\n";
      if (!r.converged) {
        err << "not converged after " << r.iterations << " iterations\n";
        return kNotConverged;
      }
      return kOk;
    }
    if (*certify || *structure) {
      const fs::path dir(*solution_dir);
      if (!pf.config && fs::is_regular_file(dir / "problem.ini")) pf.config = (dir / "problem.ini").string();
      if (!pf.out) pf.out = dir.string();
      const ProblemSpec spec = pf.resolve();
      const SavedSolution saved = read_solution(dir);
      if (*certify) {
        out << dump(run_certify(saved, spec));
      } else {
        const Json j = run_structure(saved, spec, levels, spec.out);
        out << dump(j);
      }
      return kOk;
    }
    if (*barrier) {
      const ProblemSpec spec = pf.resolve();
      const BarrierOutcome o = run_barrier(spec);
      if (pf.out) write_barrier_outputs(spec.out, o);
      out << "verdict: " << to_string(o.summary.verdict) << "\n";
      for (std::size_t k = 0; k < o.summary.components.size(); ++k) {
        const auto& c = o.summary.components[k];
        out << "component " << k << ": faces " << c.faces.size() << ", pass " << c.pass_fraction << ", fail "
            << c.fail_fraction << ", marginal " << c.marginal_fraction << ", mean S " << c.mean_S << "\n";
      }
      return kOk;
    }
    if (*perimeter) {
      const ProblemSpec spec = pf.resolve();
      const Json j = run_perimeter(spec);
      if (pf.out) {
        fs::create_directories(spec.out);
        write_file_atomic(spec.out / "perimeter.json", dump(j));
      }
      print_summary(out, "perimeter", j.at("perimeter").get<double>());
      return kOk;
    }
    if (*imaging) {
      const ProblemSpec spec = pf.resolve();
      const ImagingOutcome o = run_imaging(spec);
      if (pf.out) write_imaging_outputs(spec.out, o);
      print_summary(out, "rel_l2_error_c", o.report.rel_l2_error_c);
      print_summary(out, "rel_l2_error_u", o.report.rel_l2_error_u);
      print_summary(out, "excluded_fraction", o.report.recovery.excluded_fraction);
      if (!o.report.inversion.report.converged) {
        err << "inversion not converged\n";
        return kNotConverged;
      }
      return kOk;
    }
    if (*gal) {
      if (*gal->get_subcommand("list")) {
        for (const auto& e : gallery()) {
          out << std::left << std::setw(24) << e.id << std::setw(10) << to_string(e.task) << e.description << "\n";
        }
        return kOk;
      }
      const GalleryEntry& entry = gallery_entry(gallery_id);
      std::optional<fs::path> dir;
      if (gallery_out) dir = fs::path(*gallery_out);
      const GalleryOutcome o = gallery_run(entry, dir);
      for (const auto& c : o.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.expectation->pointer << " = " << std::setprecision(10) << c.value
            << " in [" << c.expectation->lo << ", " << c.expectation->hi << "] ("
            << to_string(c.expectation->provenance) << ")\n";
      }
      return o.passed ? kOk : kValidationError;
    }
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }
  return kValidationError;
}

}  // namespace leastgrad::cli
