#include "leastgrad/solver.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "leastgrad/errors.hpp"
#include "leastgrad/parallel.hpp"

namespace leastgrad {

double operator_norm_sq_bound(double h) {
  if (!(h > 0.0)) throw DomainError("operator_norm_sq_bound needs h > 0");
  return 8.0 / (h * h);
}

namespace {

class PrimalDualIteration {
 public:
  PrimalDualIteration(const ScalarGrid& f, const MetricField& m, const DomainMask& mask, const SolverOptions& opts)
      : f_(f), m_(m), mask_(mask), opts_(opts), g_(mask.geometry()) {
    kind_.assign(static_cast<std::size_t>(g_.cells()), 0);
    bound_x_.assign(kind_.size(), 0.0);
    bound_y_.assign(kind_.size(), 0.0);
    norms_.reserve(kind_.size());
    for (int c = 0; c < g_.cells(); ++c) {
      norms_.push_back(mask.interior(c) ? m.at(c) : LocalNorm(NormKind::IsotropicEuclidean, 1.0));
    }
    for (int c : mask.host_cells()) {
      if (mask.interior(c)) {
        kind_[static_cast<std::size_t>(c)] = kInterior;
        continue;
      }
      std::uint8_t k = 0;
      if (mask.x_active(c)) {
        k |= kExteriorX;
        bound_x_[static_cast<std::size_t>(c)] = face_norm(m, mask, c, 0);
      }
      if (mask.y_active(c)) {
        k |= kExteriorY;
        bound_y_[static_cast<std::size_t>(c)] = face_norm(m, mask, c, 1);
      }
      kind_[static_cast<std::size_t>(c)] = k;
    }
  }

  void step(SolverState& s) const {
    const double inv_h = 1.0 / g_.h;
    const double sigma = s.sigma;
    const double tau = s.tau;
    const int nx = g_.nx;

    parallel_rows(g_.ny, opts_.threads, [&](int jb, int je) {
      for (int j = jb; j < je; ++j) {
        for (int i = 0; i < nx; ++i) {
          const int c = j * nx + i;
          const std::uint8_t k = kind_[static_cast<std::size_t>(c)];
          if (k == 0) continue;
          const double ub = s.u_bar[c];
          Vec2& v = s.v[c];
          if (k == kInterior) {
            const Vec2 g{(s.u_bar[c + 1] - ub) * inv_h, (s.u_bar[c + nx] - ub) * inv_h};
            v = norms_[static_cast<std::size_t>(c)].project(v + sigma * g);
            continue;
          }
          if (k & kExteriorX) {
            const double b = bound_x_[static_cast<std::size_t>(c)];
            v.x = std::clamp(v.x + sigma * (s.u_bar[c + 1] - ub) * inv_h, -b, b);
          }
          if (k & kExteriorY) {
            const double b = bound_y_[static_cast<std::size_t>(c)];
            v.y = std::clamp(v.y + sigma * (s.u_bar[c + nx] - ub) * inv_h, -b, b);
          }
        }
      }
    });

    parallel_rows(g_.ny, opts_.threads, [&](int jb, int je) {
      for (int j = jb; j < je; ++j) {
        for (int i = 0; i < nx; ++i) {
          const int c = j * nx + i;
          if (kind_[static_cast<std::size_t>(c)] != kInterior) continue;
          const double div = (s.v[c].x - s.v[c - 1].x) * inv_h + (s.v[c].y - s.v[c - nx].y) * inv_h;
          const double u_old = s.u[c];
          const double u_new = u_old + tau * div;
          s.u[c] = u_new;
          s.u_bar[c] = 2.0 * u_new - u_old;
        }
      }
    });
    ++s.iteration;
  }

  GapReport evaluate(const SolverState& s) const { return duality_gap(s.u, f_, m_, mask_, s.v); }

  bool converged(const GapReport& r) const {
    const double stencil_gap = r.stencil_primal - r.dual;
    return std::abs(stencil_gap) <= opts_.tol_gap * std::max(1.0, std::abs(r.stencil_primal)) &&
           r.div_residual <= opts_.tol_div;
  }

 private:
  static constexpr std::uint8_t kInterior = 4;
  static constexpr std::uint8_t kExteriorX = 1;
  static constexpr std::uint8_t kExteriorY = 2;

  const ScalarGrid& f_;
  const MetricField& m_;
  const DomainMask& mask_;
  SolverOptions opts_;
  GridGeometry g_;
  std::vector<std::uint8_t> kind_;
  std::vector<double> bound_x_;
  std::vector<double> bound_y_;
  std::vector<LocalNorm> norms_;
};

void check_problem(const ScalarGrid& f, const MetricField& m, const DomainMask& mask) {
  require_same_geometry(f.geometry(), mask.geometry(), "f vs mask");
  require_same_geometry(m.geometry(), mask.geometry(), "metric vs mask");
  for (const BoundaryFace& face : mask.faces()) {
    if (!std::isfinite(f[face.exterior_cell])) throw DomainError("boundary data is not finite on the ghost band");
  }
  const MetricValidation v = validate(m, mask);
  if (!v.valid) {
    const MetricViolation& first = v.violations.front();
    throw InvalidMetricError("invalid metric at cell " + std::to_string(first.cell) + ": " + first.message);
  }
}

SolveResult run(SolverState state, const ScalarGrid& f, const MetricField& m, const DomainMask& mask,
                long extra_iters, const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const PrimalDualIteration it(f, m, mask, opts);
  const long check_every = std::max(1L, opts.check_every);
  const long stop_at = state.iteration + std::max(0L, extra_iters);

  GapReport last;
  bool have_fresh = false;

  // Checks run on a fixed schedule of absolute iteration numbers, so a run
  // split into several resumes visits exactly the same iterates.
  while (!state.converged && state.iteration < stop_at) {
    it.step(state);
    have_fresh = false;
    if (state.iteration == 1 || state.iteration % check_every == 0) {
      last = it.evaluate(state);
      have_fresh = true;
      if (!std::isfinite(last.primal) || !std::isfinite(last.dual) || !std::isfinite(last.div_residual)) {
        throw NumericalError("non-finite iterate at iteration " + std::to_string(state.iteration));
      }
      state.history.push_back({state.iteration, last.stencil_primal, last.dual, last.stencil_primal - last.dual,
                               last.div_residual});
      if (it.converged(last)) state.converged = true;
    }
  }
  if (!have_fresh) last = it.evaluate(state);

  SolveResult out;
  SolveReport& rep = out.report;
  rep.iterations = state.iteration;
  rep.history = state.history;
  rep.energy = last.energy;
  rep.primal = last.primal;
  rep.dual = last.dual;
  rep.gap = last.gap;
  rep.stencil_gap = last.stencil_primal - last.dual;
  rep.relative_gap = std::abs(rep.stencil_gap) / std::max(1.0, std::abs(last.stencil_primal));
  rep.certified_dual = last.certified_dual;
  rep.div_residual = last.div_residual;
  rep.feas_residual = last.feas_residual;
  rep.converged = state.converged;
  rep.u_min = std::numeric_limits<double>::infinity();
  rep.u_max = -rep.u_min;
  for (int c : mask.interior_cells()) {
    rep.u_min = std::min(rep.u_min, state.u[c]);
    rep.u_max = std::max(rep.u_max, state.u[c]);
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.u = state.u;
  out.T = state.v;
  out.state = std::move(state);
  return out;
}

}  // namespace

SolveResult solve_relaxed(const ScalarGrid& f, const MetricField& m, const DomainMask& mask,
                          const SolverOptions& opts) {
  check_problem(f, m, mask);
  const double h = mask.geometry().h;
  SolverState s;
  s.tau = opts.tau.value_or(h / std::sqrt(8.0));
  s.sigma = opts.sigma.value_or(h / std::sqrt(8.0));
  if (!(s.tau > 0.0) || !(s.sigma > 0.0) || s.tau * s.sigma * operator_norm_sq_bound(h) > 1.0 + 1e-12) {
    throw DomainError("step sizes must satisfy tau sigma 8/h^2 <= 1");
  }
  if (!(opts.tol_gap > 0.0) || !(opts.tol_div > 0.0)) throw DomainError("solver tolerances must be positive");
  s.u = f;
  if (opts.seed) {
    const auto [lo, hi] = boundary_data_range(f, mask);
    std::mt19937_64 rng(*opts.seed);
    std::uniform_real_distribution<double> dist(lo, hi > lo ? hi : lo + 1.0);
    for (int c : mask.interior_cells()) s.u[c] = dist(rng);
  }
  s.u_bar = s.u;
  s.v = VectorGrid(mask.geometry());
  s.mask_flags.assign(mask.flags().begin(), mask.flags().end());
  return run(std::move(s), f, m, mask, opts.max_iters, opts);
}

SolveResult resume(const SolverState& state, const ScalarGrid& f, const MetricField& m, const DomainMask& mask,
                   long extra_iters, const SolverOptions& opts) {
  check_problem(f, m, mask);
  if (!(state.u.geometry() == mask.geometry()) || !(state.v.geometry() == mask.geometry()) ||
      !(state.u_bar.geometry() == mask.geometry()) ||
      !std::equal(state.mask_flags.begin(), state.mask_flags.end(), mask.flags().begin(), mask.flags().end())) {
    throw DomainError("solver state does not match this grid and mask");
  }
  SolverState s = state;
  // Ghost cells follow the supplied boundary data.
  for (int c = 0; c < mask.geometry().cells(); ++c) {
    if (!mask.interior(c) && (s.u[c] != f[c] || s.u_bar[c] != f[c])) {
      throw DomainError("solver state was produced with different boundary data");
    }
  }
  return run(std::move(s), f, m, mask, extra_iters, opts);
}

}  // namespace leastgrad
