// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "leastgrad/barrier.hpp"
#include "leastgrad/checkpoint.hpp"
#include "leastgrad/cli/gallery.hpp"
#include "leastgrad/functional.hpp"
#include "leastgrad/imaging.hpp"
#include "leastgrad/report.hpp"
#include "leastgrad/solver.hpp"
#include "leastgrad/structure.hpp"

using namespace leastgrad;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

MetricField unit_metric(const GridGeometry& g) { return MetricField::constant(NormKind::IsotropicEuclidean, g, 1.0); }

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// ---- 1 -------------------------------------------------------------------

struct DiskRun {
  DomainMask mask;
  ScalarGrid f;
  SolveResult result;
  double seconds = 0.0;
};

DiskRun disk_linear() {
  DiskRun r;
  r.mask = build_mask(Disk{{0, 0}, 1}, 128);
  r.f = sample(r.mask.geometry(), [](const Vec2& p) { return p.x; });
  const auto t0 = std::chrono::steady_clock::now();
  r.result = solve_relaxed(r.f, unit_metric(r.mask.geometry()), r.mask);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void criterion_duality(const DiskRun& d, Verdict& v) {
  const SolveReport& s = d.result.report;
  const double relaxed_rel_gap = (s.primal - s.dual) / s.primal;
  v.detail << "primal/pi=" << s.primal / kPi << " dual/pi=" << s.dual / kPi << " rel_gap=" << s.relative_gap
           << " relaxed_rel_gap=" << relaxed_rel_gap << " div=" << s.div_residual << " feas=" << s.feas_residual
           << " time=" << d.seconds << "s";
  v.require(s.converged, "converged");
  v.require(s.primal >= 0.99 * kPi && s.primal <= 1.01 * kPi, "primal in [0.99pi, 1.01pi]");
  v.require(s.dual >= 0.98 * kPi && s.dual <= s.primal, "dual in [0.98pi, primal]");
  v.require(s.relative_gap <= 1e-3 && relaxed_rel_gap <= 1e-3, "relative gap <= 1e-3");
  v.require(s.div_residual <= 1e-6, "div residual <= 1e-6");
  v.require(s.feas_residual <= 1e-9, "feasibility <= 1e-9");
  v.require(d.seconds <= 120.0, "runtime <= 2 min");
}

// ---- 2 -------------------------------------------------------------------

struct TopRun {
  DomainMask mask;
  ScalarGrid f;
  SolveResult result;
};

TopRun top_edge() {
  TopRun r;
  r.mask = build_mask(Box{1, 1, {0, 0}}, 64);
  r.f = sample(r.mask.geometry(), [](const Vec2& p) { return p.y > 1 && p.x > 0 && p.x < 1 ? 1.0 : 0.0; });
  r.result = solve_relaxed(r.f, unit_metric(r.mask.geometry()), r.mask);
  return r;
}

void criterion_detachment(const TopRun& t, Verdict& v) {
  const MetricField m = unit_metric(t.mask.geometry());
  const BoundaryJumpReport b = boundary_jump_report(t.result.u, t.f, t.result.T, m, t.mask);
  std::size_t top = 0, top_flagged = 0, other = 0, other_flagged = 0;
  double min_top_trace = std::numeric_limits<double>::infinity();
  double worst_residual = 0.0;
  for (std::size_t k = 0; k < t.mask.faces().size(); ++k) {
    const bool flagged = b.jump[k] != FaceJump::None;
    if (t.mask.faces()[k].dir == FaceDir::North) {
      ++top;
      top_flagged += flagged;
      min_top_trace = std::min(min_top_trace, b.trace[k]);
    } else {
      ++other;
      other_flagged += flagged;
    }
    if (flagged) worst_residual = std::max(worst_residual, std::abs(b.residual[k]));
  }
  const double total = t.result.report.primal;
  const double top_frac = static_cast<double>(top_flagged) / static_cast<double>(top);
  const double other_frac = static_cast<double>(other_flagged) / static_cast<double>(other);
  v.detail << "relaxed_total=" << total << " top_flagged=" << top_frac << " other_flagged=" << other_frac
           << " max_residual=" << worst_residual << " min_top_trace=" << min_top_trace
           << " iterations=" << t.result.report.iterations;
  v.require(t.result.report.converged, "converged");
  v.require(total >= 0.98 && total <= 1.02, "relaxed total in [0.98, 1.02]");
  v.require(top_frac >= 0.9, ">= 90% of top faces flagged");
  v.require(other_frac <= 0.05, "<= 5% of other faces flagged");
  v.require(worst_residual <= 5e-2, "boundary residual <= 5e-2 on flagged faces");
  v.require(min_top_trace >= 0.95, "[T,nu] >= 0.95 on top faces");
}

// ---- 3 -------------------------------------------------------------------

void criterion_alignment(const DiskRun& d, const TopRun& t, Verdict& v) {
  const AlignmentReport a = alignment_report(d.result.u, d.result.T, unit_metric(d.mask.geometry()), d.mask);
  const AlignmentReport b = alignment_report(t.result.u, t.result.T, unit_metric(t.mask.geometry()), t.mask);
  v.detail << "disk mean=" << a.weighted_mean << " min=" << a.min_residual << "; top-edge mean=" << b.weighted_mean
           << " min=" << b.min_residual;
  v.require(a.weighted_mean <= 1e-2 && b.weighted_mean <= 1e-2, "weighted mean alignment <= 1e-2");
  v.require(a.min_residual >= -1e-9 && b.min_residual >= -1e-9, "alignment residual >= -1e-9");
}

// ---- 4 -------------------------------------------------------------------

void criterion_green(Verdict& v) {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Shape shapes[] = {Box{1, 1, {0, 0}}, Disk{{0, 0}, 1}, Annulus{{0, 0}, 0.5, 1.0}};
  double worst = 0.0, worst_lib = 0.0;
  int pairs = 0;
  for (const Shape& s : shapes) {
    for (int n : {16, 32}) {
      const DomainMask m = build_mask(s, n);
      const GridGeometry& g = m.geometry();
      const double h = g.h;
      for (int t = 0; t < 100; ++t) {
        ScalarGrid u(g);
        VectorGrid w(g);
        for (int c = 0; c < g.cells(); ++c) {
          u[c] = dist(rng);
          w[c] = {dist(rng), dist(rng)};
        }
        // The three sums of the identity, assembled here from the operators.
        const VectorGrid gu = gradient(u, m);
        const ScalarGrid div = divergence(w, m);
        const BoundaryField tr = boundary_trace(w, m);
        double boundary = 0.0, volume = 0.0, pairing_sum = 0.0;
        for (std::size_t k = 0; k < m.faces().size(); ++k) boundary += h * u[m.faces()[k].exterior_cell] * tr[k];
        for (int c : m.interior_cells()) volume += h * h * u[c] * div[c];
        for (int c = 0; c < g.cells(); ++c) pairing_sum += h * h * (w[c].x * gu[c].x + w[c].y * gu[c].y);
        const double scale = std::max({std::abs(boundary), std::abs(volume), std::abs(pairing_sum), 1e-300});
        worst = std::max(worst, std::abs(boundary - volume - pairing_sum) / scale);
        worst_lib = std::max(worst_lib, green_identity_residual(u, w, m));
        ++pairs;
      }
    }
  }
  v.detail << pairs << " pairs, max relative residual " << worst << " (library " << worst_lib << ")";
  v.require(worst <= 1e-12 && worst_lib <= 1e-12, "Green residual <= 1e-12");
}

// ---- 5 -------------------------------------------------------------------

double phi_formula(NormKind k, double a, const Sym2& s, Vec2 p) {
  switch (k) {
    case NormKind::IsotropicEuclidean:
      return a * std::hypot(p.x, p.y);
    case NormKind::Riemannian:
      return a * std::sqrt(s.xx * p.x * p.x + 2 * s.xy * p.x * p.y + s.yy * p.y * p.y);
    case NormKind::CrystallineL1:
      return a * (std::abs(p.x) + std::abs(p.y));
    case NormKind::CrystallineLinf:
      return a * std::max(std::abs(p.x), std::abs(p.y));
  }
  return 0.0;
}

void criterion_metric(Verdict& v) {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u01(0.0, 1.0), sym(-1.0, 1.0);
  const int dirs = 4096;
  double worst = 0.0;
  int cases = 0;
  for (NormKind k : {NormKind::IsotropicEuclidean, NormKind::Riemannian, NormKind::CrystallineL1,
                     NormKind::CrystallineLinf}) {
    for (int t = 0; t < 100; ++t) {
      const double a = 0.2 + 3.0 * u01(rng);
      // Random SPD tensor with eigenvalues in [0.25, 4].
      const double th = kPi * u01(rng), l1 = 0.25 + 3.75 * u01(rng), l2 = 0.25 + 3.75 * u01(rng);
      const double c = std::cos(th), s = std::sin(th);
      const Sym2 tensor{l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c};
      const Vec2 xi{3 * sym(rng), 3 * sym(rng)};
      const LocalNorm norm(k, a, tensor);
      double sup = 0.0;
      for (int j = 0; j < dirs; ++j) {
        const double ang = 2.0 * kPi * j / dirs;
        const Vec2 p{std::cos(ang), std::sin(ang)};
        sup = std::max(sup, (xi.x * p.x + xi.y * p.y) / phi_formula(k, a, tensor, p));
      }
      worst = std::max(worst, rel(norm.dual(xi), sup));
      ++cases;
    }
  }
  // Generalised Cauchy-Schwarz: xi . eta <= phi(xi) phi0(eta).
  double worst_cs = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < 10000; ++t) {
    const auto k = static_cast<NormKind>(t % 4);
    const double th = kPi * u01(rng), l1 = 0.25 + 3.75 * u01(rng), l2 = 0.25 + 3.75 * u01(rng);
    const double c = std::cos(th), s = std::sin(th);
    const LocalNorm norm(k, 0.2 + 3.0 * u01(rng), {l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c});
    const Vec2 xi{sym(rng), sym(rng)}, eta{sym(rng), sym(rng)};
    const double bound = norm.phi(xi) * norm.dual(eta);
    worst_cs = std::max(worst_cs, (xi.x * eta.x + xi.y * eta.y - bound) / std::max(bound, 1e-300));
  }
  v.detail << cases << " dual cases, max rel diff " << worst << "; Cauchy-Schwarz max excess " << worst_cs;
  v.require(worst <= 1e-3, "closed-form dual within 1e-3 of the sampled sup");
  v.require(worst_cs <= 1e-12, "Cauchy-Schwarz on 1e4 pairs");
}

// ---- 6 -------------------------------------------------------------------

void criterion_barrier(Verdict& v) {
  const int n = 128;
  const auto run = [&](const Shape& s) {
    const DomainMask m = build_mask(s, n);
    BarrierReport r = barrier_indicator(unit_metric(m.geometry()), signed_distance_field(s, m.geometry()), m);
    return std::pair{m, r};
  };
  // Disk: S = 1 / R on the boundary.
  const auto [dm, dr] = run(Disk{{0, 0}, 1});
  double disk_dev = 0.0;
  for (double s : dr.S.values) disk_dev = std::max(disk_dev, std::abs(s - 1.0));
  // Annulus: -1 / 0.5 on the inner circle, 1 on the outer.
  const auto [am, ar] = run(Annulus{{0, 0}, 0.5, 1.0});
  double inner_fail = 0, inner = 0, outer_pass = 0, outer = 0, ann_dev = 0.0;
  for (std::size_t k = 0; k < am.faces().size(); ++k) {
    const bool is_inner = norm(am.geometry().center(am.faces()[k].interior_cell)) < 0.75;
    if (is_inner) {
      ++inner;
      inner_fail += ar.classes[k] == FaceClass::Fail;
      ann_dev = std::max(ann_dev, std::abs(ar.S[k] + 2.0) / 2.0);
    } else {
      ++outer;
      outer_pass += ar.classes[k] == FaceClass::Pass;
      ann_dev = std::max(ann_dev, std::abs(ar.S[k] - 1.0));
    }
  }
  // Square: no face may pass.
  const auto [bm, br] = run(Box{1, 1, {0, 0}});
  std::size_t square_pass = 0;
  for (FaceClass c : br.classes) square_pass += c == FaceClass::Pass;
  v.detail << "disk pass=" << dr.pass_fraction << " max|S-1|=" << disk_dev << "; annulus inner fail="
           << inner_fail / inner << " outer pass=" << outer_pass / outer << " max rel dev=" << ann_dev
           << "; square marginal+fail=" << 1.0 - br.pass_fraction;
  v.require(dr.pass_fraction == 1.0, "disk 100% pass");
  v.require(inner_fail == inner && outer_pass == outer, "annulus inner 100% fail, outer 100% pass");
  v.require(square_pass == 0, "square 100% marginal/fail");
  v.require(disk_dev <= 0.05 && ann_dev <= 0.05, "S within 5% of 1/R");
}

// ---- 7 -------------------------------------------------------------------

void criterion_perimeter(Verdict& v) {
  double worst_half = 0.0;
  for (int n = 8; n <= 256; n += 8) {
    const DomainMask m = build_mask(Box{1, 1, {0, 0}}, n);
    const double p = phi_perimeter(indicator(Box{1, 0.5, {0, 0}}, m.geometry()), unit_metric(m.geometry()), m);
    worst_half = std::max(worst_half, std::abs(p - 3.0));
  }
  const double r = 0.5;
  const DomainMask m = build_mask(Box{2, 2, {-1, -1}}, 256);
  const double l1 = phi_perimeter(indicator(Disk{{0, 0}, r}, m.geometry()),
                                  MetricField::constant(NormKind::CrystallineL1, m.geometry(), 1.0), m);
  const double l1_err = std::abs(l1 - 8 * r) / (8 * r);
  v.detail << "half-square max |P-3|=" << worst_half << " over even n in [8,256]; l1 disk P/(8r)=" << l1 / (8 * r);
  v.require(worst_half <= 1e-12, "half-square perimeter 3");
  v.require(l1_err <= 0.03, "l1 disk perimeter within 3% of 8r");
}

// ---- 8 -------------------------------------------------------------------

void criterion_imaging(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const Box box{1, 1, {0, 0}};
  const auto fx = [](const Vec2& p) { return p.x; };
  Phantom constant;
  Phantom layered;
  layered.kind = PhantomKind::Layered;
  Phantom bump;
  bump.kind = PhantomKind::GaussianBump;
  const double e_const = run_pipeline(make_problem(constant, box, 64, fx)).rel_l2_error_c;
  const double e_layer = run_pipeline(make_problem(layered, box, 64, fx)).rel_l2_error_c;
  std::vector<double> e_bump;
  for (int n : {32, 64, 128}) e_bump.push_back(run_pipeline(make_problem(bump, box, n, fx)).rel_l2_error_c);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.detail << "constant=" << e_const << " layered=" << e_layer << " bump(32,64,128)=" << e_bump[0] << ","
           << e_bump[1] << "," << e_bump[2] << " time=" << seconds << "s";
  v.require(e_const <= 1e-2, "constant phantom <= 1e-2");
  v.require(e_layer <= 5e-2, "layered phantom <= 5e-2");
  v.require(e_bump[1] < e_bump[0] && e_bump[2] < e_bump[1], "bump error strictly decreasing");
  v.require(seconds <= 600.0, "runtime <= 10 min");
}

// ---- 9 -------------------------------------------------------------------

void criterion_determinism(Verdict& v) {
  int entries = 0, identical = 0;
  for (const auto& e : cli::gallery()) {
    const std::string first = dump(cli::gallery_run(e).report);
    const std::string second = dump(cli::gallery_run(e).report);
    ++entries;
    identical += first == second;
  }
  // resume(k) + resume(m) == run(k + m), with a checkpoint round trip between.
  const DomainMask m = build_mask(Box{1, 1, {0, 0}}, 32);
  const ScalarGrid f = sample(m.geometry(), [](const Vec2& p) { return p.y > 1 && p.x > 0 && p.x < 1 ? 1.0 : 0.0; });
  const MetricField phi = unit_metric(m.geometry());
  SolverOptions o;
  o.tol_gap = 1e-14;
  o.max_iters = 2000;
  const SolveResult whole = solve_relaxed(f, phi, m, o);
  o.max_iters = 730;
  const SolveResult part = solve_relaxed(f, phi, m, o);
  const auto dir = std::filesystem::temp_directory_path() / "leastgrad_acceptance_ckpt";
  std::filesystem::remove_all(dir);
  save_checkpoint(dir, part.state);
  const SolveResult rest = resume(load_checkpoint(dir), f, phi, m, 2000 - 730, o);
  std::filesystem::remove_all(dir);
  const bool same = rest.state.u == whole.state.u && rest.state.v == whole.state.v &&
                    rest.state.u_bar == whole.state.u_bar && rest.state.iteration == whole.state.iteration &&
                    dump(to_json(rest.report)) == dump(to_json(whole.report));
  v.detail << identical << "/" << entries << " gallery reports identical; resume 730+1270 vs 2000 "
           << (same ? "bit-identical" : "differs");
  v.require(identical == entries, "gallery reports bit-identical");
  v.require(same, "resume is bit-exact");
}

// ---- 10 ------------------------------------------------------------------

void criterion_scaling(Verdict& v) {
  const DomainMask m = build_mask(Disk{{0, 0}, 1}, 64);
  const GridGeometry& g = m.geometry();
  const ScalarGrid f = sample(g, [](const Vec2& p) { return p.x * p.x - 0.5 * p.y; });
  const MetricField base(NormKind::Riemannian, sample(g, [](const Vec2& p) { return 1.0 + 0.3 * p.x; }),
                         std::vector<Sym2>(static_cast<std::size_t>(g.cells()), Sym2{1.5, 0.2, 0.8}));
  SolverOptions o;
  o.max_iters = 3000;
  o.tol_gap = 1e-300;  // fixed budget: the iterates, not the stopping test, are compared
  const SolveResult ref = solve_relaxed(f, base, m, o);
  const double h = g.h;
  double solver_dev = 0.0, functional_dev = 0.0;
  for (double lambda : {0.5, 3.0}) {
    // Solver: with tau / lambda and sigma lambda the iterates satisfy u' = u, V' = lambda V.
    SolverOptions so = o;
    so.tau = h / std::sqrt(8.0) / lambda;
    so.sigma = h / std::sqrt(8.0) * lambda;
    const SolveReport s = solve_relaxed(f, base.scaled(lambda), m, so).report;
    const SolveReport& r = ref.report;
    solver_dev = std::max({solver_dev, rel(s.primal, lambda * r.primal), rel(s.dual, lambda * r.dual),
                           std::abs(s.gap - lambda * r.gap) / (lambda * std::abs(r.primal))});
    // Functional level, on the reference pair.
    VectorGrid lt = ref.T;
    for (auto& x : lt.values()) x = lambda * x;
    const GapReport a = duality_gap(ref.u, f, base, m, ref.T);
    const GapReport b = duality_gap(ref.u, f, base.scaled(lambda), m, lt);
    functional_dev = std::max({functional_dev, rel(b.primal, lambda * a.primal), rel(b.dual, lambda * a.dual),
                               std::abs(b.gap - lambda * a.gap) / (lambda * std::abs(a.primal))});
  }
  // f -> lambda f: energies scale by lambda for a fixed metric.
  double energy_dev = 0.0;
  ScalarGrid u = ref.u;
  for (double lambda : {0.5, 3.0}) {
    ScalarGrid lu = u, lf = f;
    for (auto& x : lu.values()) x *= lambda;
    for (auto& x : lf.values()) x *= lambda;
    const EnergyBreakdown e0 = relaxed_energy(u, f, base, m);
    const EnergyBreakdown e1 = relaxed_energy(lu, lf, base, m);
    energy_dev = std::max({energy_dev, rel(e1.relaxed_total, lambda * e0.relaxed_total),
                           rel(e1.stencil_total, lambda * e0.stencil_total)});
  }
  // Imaging: scaling the voltage leaves the recovered conductivity unchanged.
  Phantom bump;
  bump.kind = PhantomKind::GaussianBump;
  SolverOptions io;
  io.max_iters = 2000;
  io.tol_gap = 1e-300;
  const auto fx = [](const Vec2& p) { return p.x; };
  const ImagingProblem p0 = make_problem(bump, Box{1, 1, {0, 0}}, 48, fx);
  const ImagingReport i0 = run_pipeline(p0, io);
  double c_dev = 0.0;
  bool same_exclusions = true;
  for (double lambda : {0.5, 3.0}) {
    const ImagingReport i1 =
        run_pipeline(make_problem(bump, Box{1, 1, {0, 0}}, 48, [&](const Vec2& q) { return lambda * fx(q); }), io);
    same_exclusions = same_exclusions && i1.recovery.excluded == i0.recovery.excluded;
    for (int c : p0.mask.interior_cells()) {
      if (i0.recovery.excluded[static_cast<std::size_t>(c)]) continue;
      c_dev = std::max(c_dev, rel(i1.recovery.c[c], i0.recovery.c[c]));
    }
  }
  v.detail << "a->la: solver " << solver_dev << ", functional " << functional_dev << "; f->lf: energies "
           << energy_dev << ", c_rec " << c_dev;
  v.require(solver_dev <= 1e-12 && functional_dev <= 1e-12, "a -> lambda a scales primal/dual/gap (1e-12)");
  v.require(energy_dev <= 1e-12, "f -> lambda f scales energies");
  v.require(same_exclusions && c_dev <= 1e-10, "c_rec invariant under f -> lambda f (1e-10)");
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* name;
    Verdict v;
  };
  std::vector<Row> rows;
  const auto record = [&](int id, const char* name, const std::function<void(Verdict&)>& body) {
    Row row{id, name, {}};
    try {
      body(row.v);
    } catch (const std::exception& e) {
      row.v.ok = false;
      row.v.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s %2d %-26s %s\n", row.v.ok ? "PASS" : "FAIL", id, name, row.v.detail.str().c_str());
    std::fflush(stdout);
    rows.push_back(std::move(row));
  };

  DiskRun disk;
  TopRun top;
  record(1, "duality-gap certificate", [&](Verdict& v) {
    disk = disk_linear();
    criterion_duality(disk, v);
  });
  record(2, "boundary detachment", [&](Verdict& v) {
    top = top_edge();
    criterion_detachment(top, v);
  });
  record(3, "structure alignment", [&](Verdict& v) { criterion_alignment(disk, top, v); });
  record(4, "discrete Green identity", criterion_green);
  record(5, "metric duality", criterion_metric);
  record(6, "barrier sufficient cond.", criterion_barrier);
  record(7, "phi-perimeter", criterion_perimeter);
  record(8, "imaging round trip", criterion_imaging);
  record(9, "determinism", criterion_determinism);
  record(10, "scaling equivariance", criterion_scaling);

  int failed = 0;
  for (const Row& r : rows) failed += !r.v.ok;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(rows.size()) - failed, rows.size());
  return failed == 0 ? 0 : 1;
}
