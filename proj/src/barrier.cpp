#include "leastgrad/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "leastgrad/errors.hpp"
#include "leastgrad/structure.hpp"

namespace leastgrad {

ScalarGrid signed_distance_field(const Shape& shape, const GridGeometry& g) {
  return sample(g, [&](const Vec2& p) { return signed_distance(shape, p); });
}

namespace {

double eikonal_update(double a, double b, double h) {
  if (std::abs(a - b) >= h) return std::min(a, b) + h;
  return 0.5 * (a + b + std::sqrt(2.0 * h * h - (a - b) * (a - b)));
}

}  // namespace

ScalarGrid signed_distance_field(const DomainMask& mask) {
  const GridGeometry& g = mask.geometry();
  const double h = g.h;
  const double inf = std::numeric_limits<double>::infinity();
  ScalarGrid dist(g, inf);
  std::vector<std::uint8_t> fixed(static_cast<std::size_t>(g.cells()), 0);
  for (const BoundaryFace& face : mask.faces()) {
    for (int c : {face.interior_cell, face.exterior_cell}) {
      dist[c] = 0.5 * h;
      fixed[static_cast<std::size_t>(c)] = 1;
    }
  }
  if (mask.faces().empty()) throw InvalidShapeError("mask has no boundary");
  const auto value = [&](int i, int j) { return g.contains(i, j) ? dist.at(i, j) : inf; };
  bool changed = true;
  for (int round = 0; changed && round < 100; ++round) {
    changed = false;
    for (int sweep = 0; sweep < 4; ++sweep) {
      const int di = (sweep & 1) ? -1 : 1;
      const int dj = (sweep & 2) ? -1 : 1;
      for (int jj = 0; jj < g.ny; ++jj) {
        const int j = dj > 0 ? jj : g.ny - 1 - jj;
        for (int ii = 0; ii < g.nx; ++ii) {
          const int i = di > 0 ? ii : g.nx - 1 - ii;
          const int c = g.index(i, j);
          if (fixed[static_cast<std::size_t>(c)]) continue;
          const double a = std::min(value(i - 1, j), value(i + 1, j));
          const double b = std::min(value(i, j - 1), value(i, j + 1));
          if (!std::isfinite(std::min(a, b))) continue;
          const double next = eikonal_update(a, b, h);
          if (next < dist[c]) {
            dist[c] = next;
            changed = true;
          }
        }
      }
    }
  }
  for (int c = 0; c < g.cells(); ++c) {
    if (!mask.interior(c)) dist[c] = -dist[c];
  }
  return dist;
}

const char* to_string(FaceClass c) {
  switch (c) {
    case FaceClass::Pass:
      return "pass";
    case FaceClass::Fail:
      return "fail";
    case FaceClass::Marginal:
      return "marginal";
  }
  return "?";
}

const char* to_string(BarrierVerdict v) {
  switch (v) {
    case BarrierVerdict::Holds:
      return "sufficient condition holds";
    case BarrierVerdict::Fails:
      return "sufficient condition fails";
    case BarrierVerdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

BarrierReport barrier_indicator(const MetricField& m, const ScalarGrid& d, const DomainMask& mask,
                                std::optional<double> band_width, std::optional<double> delta, double kink_tol) {
  if (m.kind() == NormKind::CrystallineL1 || m.kind() == NormKind::CrystallineLinf) {
    throw InvalidMetricError(std::string("barrier indicator needs a differentiable norm, got ") + to_string(m.kind()));
  }
  require_same_geometry(d.geometry(), mask.geometry(), "distance vs mask");
  require_same_geometry(m.geometry(), mask.geometry(), "metric vs mask");
  const GridGeometry& g = mask.geometry();
  const double h = g.h;
  const int nx = g.nx;

  BarrierReport r;
  r.band_width = band_width.value_or(4.0 * h);
  r.band_values = ScalarGrid(g);

  // Centred gradient of d, available wherever all four neighbours exist.
  const auto grad_d = [&](int c) {
    return Vec2{(d[c + 1] - d[c - 1]) / (2.0 * h), (d[c + nx] - d[c - nx]) / (2.0 * h)};
  };
  const auto flux = [&](int c) {
    // Exterior cells reuse the metric of the nearest interior cell in the stencil.
    int owner = c;
    if (!mask.interior(c)) {
      for (int nb : {c + 1, c - 1, c + nx, c - nx}) {
        if (mask.interior(nb)) {
          owner = nb;
          break;
        }
      }
    }
    return m.at(owner).phi_gradient(grad_d(c));
  };
  const auto kinked = [&](int c) { return std::abs(norm(grad_d(c)) - 1.0) > kink_tol; };

  std::vector<std::uint8_t> cell_unreliable(static_cast<std::size_t>(g.cells()), 0);
  for (int c : mask.interior_cells()) {
    if (d[c] > r.band_width) continue;
    const int i = g.col(c);
    const int j = g.row(c);
    if (i < 2 || j < 2 || i + 2 >= nx || j + 2 >= g.ny) throw DomainError("band cell too close to the grid border");
    const Vec2 pe = flux(c + 1), pw = flux(c - 1), pn = flux(c + nx), ps = flux(c - nx);
    r.band_values[c] = -((pe.x - pw.x) + (pn.y - ps.y)) / (2.0 * h);
    bool bad = kinked(c);
    for (int nb : {c + 1, c - 1, c + nx, c - nx}) bad = bad || kinked(nb);
    cell_unreliable[static_cast<std::size_t>(c)] = bad ? 1 : 0;
  }

  const std::size_t nf = mask.faces().size();
  r.S.values.resize(nf);
  r.unreliable.resize(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    const int c = mask.faces()[k].interior_cell;
    r.S[k] = r.band_values[c];
    r.unreliable[k] = cell_unreliable[static_cast<std::size_t>(c)];
  }
  reclassify(r, delta.value_or(10.0 * h));
  return r;
}

void reclassify(BarrierReport& report, double delta) {
  if (!(delta > 0.0)) throw DomainError("barrier threshold must be positive");
  report.delta = delta;
  const std::size_t nf = report.S.size();
  report.classes.resize(nf);
  std::size_t pass = 0, fail = 0;
  for (std::size_t k = 0; k < nf; ++k) {
    FaceClass c = FaceClass::Marginal;
    if (!report.unreliable[k]) {
      if (report.S[k] > delta) c = FaceClass::Pass;
      if (report.S[k] < -delta) c = FaceClass::Fail;
    }
    report.classes[k] = c;
    pass += c == FaceClass::Pass;
    fail += c == FaceClass::Fail;
  }
  const double total = nf > 0 ? static_cast<double>(nf) : 1.0;
  report.pass_fraction = static_cast<double>(pass) / total;
  report.fail_fraction = static_cast<double>(fail) / total;
  report.marginal_fraction = static_cast<double>(nf - pass - fail) / total;
}

BarrierSummary classify(const BarrierReport& report, const DomainMask& mask) {
  std::vector<std::size_t> all(mask.faces().size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  BarrierSummary s;
  bool all_hold = true;
  bool any_fail = false;
  for (auto& faces : boundary_arcs(mask, all)) {
    BoundaryComponentSummary comp;
    double sum = 0.0;
    std::size_t pass = 0, fail = 0;
    for (std::size_t k : faces) {
      comp.measure += mask.faces()[k].measure;
      sum += report.S[k];
      pass += report.classes[k] == FaceClass::Pass;
      fail += report.classes[k] == FaceClass::Fail;
    }
    const double n = static_cast<double>(faces.size());
    comp.pass_fraction = static_cast<double>(pass) / n;
    comp.fail_fraction = static_cast<double>(fail) / n;
    comp.marginal_fraction = 1.0 - comp.pass_fraction - comp.fail_fraction;
    comp.mean_S = sum / n;
    all_hold = all_hold && comp.pass_fraction >= 0.9;
    any_fail = any_fail || comp.fail_fraction > 0.5;
    comp.faces = std::move(faces);
    s.components.push_back(std::move(comp));
  }
  s.verdict = any_fail ? BarrierVerdict::Fails : all_hold ? BarrierVerdict::Holds : BarrierVerdict::Inconclusive;
  return s;
}

}  // namespace leastgrad
