#include "leastgrad/imaging.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <cmath>

#include "leastgrad/errors.hpp"
#include "leastgrad/functional.hpp"
#include "leastgrad/structure.hpp"
#include "leastgrad/summation.hpp"

namespace leastgrad {

const char* to_string(PhantomKind k) {
  switch (k) {
    case PhantomKind::Constant:
      return "constant";
    case PhantomKind::Layered:
      return "layered";
    case PhantomKind::GaussianBump:
      return "bump";
  }
  return "?";
}

PhantomKind parse_phantom_kind(std::string_view text) {
  if (text == "constant") return PhantomKind::Constant;
  if (text == "layered") return PhantomKind::Layered;
  if (text == "bump" || text == "gaussian-bump") return PhantomKind::GaussianBump;
  throw DomainError("unknown phantom '" + std::string(text) + "'");
}

double Phantom::operator()(const Vec2& p) const {
  switch (kind) {
    case PhantomKind::Constant:
      return base;
    case PhantomKind::Layered:
      return base + amplitude * p.y;
    case PhantomKind::GaussianBump: {
      const Vec2 q = p - center;
      return base + amplitude * std::exp(-dot(q, q) / width);
    }
  }
  return base;
}

ImagingProblem make_problem(const Phantom& phantom, const Shape& shape, int n,
                            const std::function<double(const Vec2&)>& f) {
  ImagingProblem p;
  p.mask = build_mask(shape, n);
  p.c_true = sample(p.mask.geometry(), phantom);
  p.f = sample(p.mask.geometry(), f);
  return p;
}

namespace {

Sym2 tensor_at(const std::vector<Sym2>& sigma0, int c) {
  return sigma0.empty() ? Sym2::identity() : sigma0[static_cast<std::size_t>(c)];
}

void check_problem(const ImagingProblem& p) {
  const GridGeometry& g = p.mask.geometry();
  require_same_geometry(p.c_true.geometry(), g, "c vs mask");
  require_same_geometry(p.f.geometry(), g, "f vs mask");
  if (!p.sigma0.empty() && p.sigma0.size() != static_cast<std::size_t>(g.cells())) {
    throw DimensionError("sigma0 must have one tensor per cell");
  }
  for (int c = 0; c < g.cells(); ++c) {
    if (!(p.c_true[c] > 0.0)) throw DomainError("conformal factor must be positive");
    const Sym2 s = tensor_at(p.sigma0, c);
    if (!(s.xx > 0.0 && s.det() > 0.0)) throw InvalidMetricError("sigma0 must be positive definite");
  }
}

// Conductivity sigma = c sigma0 at a cell.
Sym2 conductivity(const ImagingProblem& p, int c) {
  const Sym2 s = tensor_at(p.sigma0, c);
  const double k = p.c_true[c];
  return {k * s.xx, k * s.xy, k * s.yy};
}

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

VectorGrid current(const ImagingProblem& p, const ScalarGrid& u, bool all_cells) {
  const GridGeometry& g = p.mask.geometry();
  const double h = g.h;
  VectorGrid j(g);
  const auto fill = [&](int c) {
    const Vec2 grad{(u[c + 1] - u[c - 1]) / (2.0 * h), (u[c + g.nx] - u[c - g.nx]) / (2.0 * h)};
    j[c] = -1.0 * conductivity(p, c).apply(grad);
  };
  if (all_cells) {
    for (int jj = 1; jj + 1 < g.ny; ++jj) {
      for (int ii = 1; ii + 1 < g.nx; ++ii) fill(g.index(ii, jj));
    }
  } else {
    for (int c : p.mask.interior_cells()) fill(c);
  }
  return j;
}

ForwardResult solve_potential(const ImagingProblem& p, double tol, bool current_everywhere) {
  check_problem(p);
  if (!(tol > 0.0)) throw DomainError("forward tolerance must be positive");
  const GridGeometry& g = p.mask.geometry();
  const double h = g.h;
  const auto& cells = p.mask.interior_cells();
  std::vector<int> unknown(static_cast<std::size_t>(g.cells()), -1);
  for (std::size_t k = 0; k < cells.size(); ++k) unknown[static_cast<std::size_t>(cells[k])] = static_cast<int>(k);

  // Face conductivity between c and its neighbour along `axis`.
  const auto face_sigma = [&](int c, int nb, int axis) {
    const Sym2 a = conductivity(p, c);
    const Sym2 b = conductivity(p, nb);
    return axis == 0 ? harmonic(a.xx, b.xx) : harmonic(a.yy, b.yy);
  };

  const int n = static_cast<int>(cells.size());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(5 * n));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    const int c = cells[static_cast<std::size_t>(k)];
    double diag = 0.0;
    for (const auto& [nb, axis] : {std::pair{c + 1, 0}, std::pair{c - 1, 0}, std::pair{c + g.nx, 1},
                                  std::pair{c - g.nx, 1}}) {
      const double s = face_sigma(c, nb, axis);
      diag += s;
      const int other = unknown[static_cast<std::size_t>(nb)];
      if (other >= 0) {
        entries.emplace_back(k, other, -s);
      } else {
        rhs[k] += s * p.f[nb];
      }
    }
    entries.emplace_back(k, k, diag);
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(std::max(1000, 20 * n));
  cg.compute(a);
  const Eigen::VectorXd x = cg.solve(rhs);
  if (cg.info() != Eigen::Success || !(cg.error() <= tol)) {
    throw NumericalError("forward CG did not converge (residual " + std::to_string(cg.error()) + ")");
  }

  ForwardResult out;
  out.cg_iterations = cg.iterations();
  out.cg_residual = cg.error();
  out.u = p.f;
  for (int k = 0; k < n; ++k) out.u[cells[static_cast<std::size_t>(k)]] = x[k];
  out.J = current(p, out.u, current_everywhere);

  std::vector<double> fluxes;
  fluxes.reserve(p.mask.faces().size());
  for (const BoundaryFace& face : p.mask.faces()) {
    const int axis = face.dir == FaceDir::East || face.dir == FaceDir::West ? 0 : 1;
    const double s = face_sigma(face.interior_cell, face.exterior_cell, axis);
    // Outward flux -sigma du/dn times the face length.
    fluxes.push_back(-s * (out.u[face.exterior_cell] - out.u[face.interior_cell]) / h * face.measure);
  }
  out.flux_sum = pairwise_sum(fluxes);
  for (double& v : fluxes) v = std::abs(v);
  out.flux_scale = pairwise_sum(fluxes);
  return out;
}

}  // namespace

ForwardResult forward_solve(const ImagingProblem& p, double tol) { return solve_potential(p, tol, false); }

ForwardResult forward_solve_refined(const Phantom& phantom, const Shape& shape, int n,
                                    const std::function<double(const Vec2&)>& f, double tol) {
  const DomainMask coarse = build_mask(shape, n);
  const GridGeometry& cg = coarse.geometry();
  GridGeometry fine{2 * cg.nx, 2 * cg.ny, 0.5 * cg.h, cg.origin};
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(fine.cells()));
  for (int c = 0; c < fine.cells(); ++c) flags[static_cast<std::size_t>(c)] = contains(shape, fine.center(c)) ? 1 : 0;
  ImagingProblem p;
  p.mask = DomainMask(fine, std::move(flags));
  p.c_true = sample(fine, phantom);
  p.f = sample(fine, f);
  const ForwardResult fr = solve_potential(p, tol, true);

  ForwardResult out;
  out.cg_iterations = fr.cg_iterations;
  out.cg_residual = fr.cg_residual;
  out.flux_sum = fr.flux_sum;
  out.flux_scale = fr.flux_scale;
  out.u = sample(cg, f);
  out.J = VectorGrid(cg);
  for (int c : coarse.interior_cells()) {
    const int i = 2 * cg.col(c);
    const int j = 2 * cg.row(c);
    const int k00 = fine.index(i, j), k10 = fine.index(i + 1, j), k01 = fine.index(i, j + 1),
              k11 = fine.index(i + 1, j + 1);
    out.u[c] = 0.25 * (fr.u[k00] + fr.u[k10] + fr.u[k01] + fr.u[k11]);
    out.J[c] = 0.25 * (fr.J[k00] + fr.J[k10] + fr.J[k01] + fr.J[k11]);
  }
  return out;
}

ScalarGrid weight_from_current(const VectorGrid& j, const std::vector<Sym2>& sigma0) {
  const GridGeometry& g = j.geometry();
  if (!sigma0.empty() && sigma0.size() != static_cast<std::size_t>(g.cells())) {
    throw DimensionError("sigma0 must have one tensor per cell");
  }
  ScalarGrid a(g);
  for (int c = 0; c < g.cells(); ++c) {
    const Sym2 s = tensor_at(sigma0, c);
    if (!(s.det() > 0.0 && s.xx > 0.0)) throw InvalidMetricError("sigma0 must be positive definite");
    a[c] = std::sqrt(std::max(s.inverse().quad(j[c]), 0.0));
  }
  return a;
}

double default_grad_floor(const ScalarGrid& u_rec, const DomainMask& mask) {
  const auto [lo, hi] = boundary_data_range(u_rec, mask);
  return 1e-3 * (hi - lo) / mask.diameter();
}

Recovery recover_conductivity(const ScalarGrid& u_rec, const ScalarGrid& a, const std::vector<Sym2>& sigma0,
                              const DomainMask& mask, std::optional<double> grad_floor) {
  const GridGeometry& g = mask.geometry();
  require_same_geometry(u_rec.geometry(), g, "u vs mask");
  require_same_geometry(a.geometry(), g, "a vs mask");
  Recovery r;
  r.grad_floor = grad_floor.value_or(default_grad_floor(u_rec, mask));
  r.c = ScalarGrid(g);
  r.excluded.assign(static_cast<std::size_t>(g.cells()), 1);
  const double h = g.h;
  std::size_t excluded = 0;
  for (int c : mask.interior_cells()) {
    const Vec2 grad{(u_rec[c + 1] - u_rec[c - 1]) / (2.0 * h), (u_rec[c + g.nx] - u_rec[c - g.nx]) / (2.0 * h)};
    const double den = std::sqrt(std::max(tensor_at(sigma0, c).quad(grad), 0.0));
    if (den < r.grad_floor) {
      ++excluded;
      continue;
    }
    r.excluded[static_cast<std::size_t>(c)] = 0;
    r.c[c] = a[c] / den;
  }
  r.excluded_fraction = static_cast<double>(excluded) / static_cast<double>(mask.interior_cells().size());
  return r;
}

MetricField imaging_metric(const ScalarGrid& a, const std::vector<Sym2>& sigma0, const DomainMask& mask,
                           double weight_floor) {
  ScalarGrid w(a.geometry(), 1.0);
  for (int c : mask.interior_cells()) w[c] = std::max(a[c], weight_floor);
  return MetricField(NormKind::Riemannian, std::move(w), sigma0);
}

double relative_l2_error(const ScalarGrid& x, const ScalarGrid& reference, const DomainMask& mask,
                         const std::vector<std::uint8_t>& excluded) {
  std::vector<double> num, den;
  for (int c : mask.interior_cells()) {
    if (!excluded.empty() && excluded[static_cast<std::size_t>(c)]) continue;
    const double e = x[c] - reference[c];
    num.push_back(e * e);
    den.push_back(reference[c] * reference[c]);
  }
  const double d = pairwise_sum(den);
  return d > 0.0 ? std::sqrt(pairwise_sum(num) / d) : 0.0;
}

ImagingReport run_pipeline(const ImagingProblem& p, const SolverOptions& opts, double forward_tol) {
  return run_pipeline(p, forward_solve(p, forward_tol), opts);
}

ImagingReport run_pipeline(const ImagingProblem& p, ForwardResult forward, const SolverOptions& opts) {
  check_problem(p);
  ImagingReport r;
  r.forward = std::move(forward);
  r.a = weight_from_current(r.forward.J, p.sigma0);
  const MetricField m = imaging_metric(r.a, p.sigma0, p.mask);
  r.inversion = solve_relaxed(p.f, m, p.mask, opts);
  r.recovery = recover_conductivity(r.inversion.u, r.a, p.sigma0, p.mask);
  r.rel_l2_error_c = relative_l2_error(r.recovery.c, p.c_true, p.mask, r.recovery.excluded);
  r.rel_l2_error_u = relative_l2_error(r.inversion.u, r.forward.u, p.mask, r.recovery.excluded);
  r.alignment = alignment_report(r.inversion.u, r.inversion.T, m, p.mask).weighted_mean;
  return r;
}

}  // namespace leastgrad
