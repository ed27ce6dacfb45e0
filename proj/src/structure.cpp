#include "leastgrad/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "leastgrad/errors.hpp"
#include "leastgrad/functional.hpp"
#include "leastgrad/summation.hpp"

namespace leastgrad {

AlignmentReport alignment_report(const ScalarGrid& u, const VectorGrid& t, const MetricField& m,
                                 const DomainMask& mask, double grad_tol) {
  require_same_geometry(u.geometry(), mask.geometry(), "u vs mask");
  require_same_geometry(t.geometry(), mask.geometry(), "T vs mask");
  const double h2 = mask.geometry().h * mask.geometry().h;
  const VectorGrid grad = gradient(u, mask);
  const auto [lo, hi] = boundary_data_range(u, mask);

  AlignmentReport r;
  r.residual = ScalarGrid(mask.geometry());
  r.grad_threshold = grad_tol * (hi - lo) / mask.diameter();
  if (feasibility_residual(t, m, mask) > 1e-6) {
    r.warnings.push_back("T is not dual feasible; residuals may be negative");
  }
  std::vector<double> num, den, all;
  r.min_residual = std::numeric_limits<double>::infinity();
  for (int c : mask.interior_cells()) {
    const LocalNorm local = m.at(c);
    const Vec2 g = grad[c];
    const double phi = local.phi(g);
    const double res = phi - dot(t[c], g);
    r.residual[c] = res;
    r.min_residual = std::min(r.min_residual, res);
    all.push_back(h2 * res);
    if (norm(g) > r.grad_threshold) {
      num.push_back(h2 * res);
      den.push_back(h2 * phi);
      ++r.cells_counted;
    }
  }
  r.total_defect = pairwise_sum(all);
  r.weighted_mean = pairwise_sum(num) / std::max(pairwise_sum(den), 1e-300);
  return r;
}

double default_jump_tol(const DomainMask& mask) { return 10.0 * mask.geometry().h / mask.diameter(); }

BoundaryJumpReport boundary_jump_report(const ScalarGrid& u, const ScalarGrid& f, const VectorGrid& t,
                                        const MetricField& m, const DomainMask& mask,
                                        std::optional<double> jump_tol, double saturation_tol) {
  require_same_geometry(u.geometry(), mask.geometry(), "u vs mask");
  require_same_geometry(f.geometry(), mask.geometry(), "f vs mask");
  const auto [lo, hi] = boundary_data_range(f, mask);
  BoundaryJumpReport r;
  r.threshold = jump_tol.value_or(default_jump_tol(mask)) * (hi - lo);
  r.trace = boundary_trace(t, mask);
  const std::size_t nf = mask.faces().size();
  r.jump.assign(nf, FaceJump::None);
  r.residual.values.assign(nf, 0.0);
  r.unsaturated.assign(nf, 0);
  double attached = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < nf; ++k) {
    const BoundaryFace& face = mask.faces()[k];
    const double phi_nu = m.at(face.interior_cell).phi(face.normal);
    const double diff = f[face.exterior_cell] - u[face.interior_cell];
    total += face.measure;
    r.unsaturated[k] = std::abs(r.trace[k]) < (1.0 - saturation_tol) * phi_nu ? 1 : 0;
    if (std::abs(diff) <= r.threshold) {
      attached += face.measure;
      continue;
    }
    r.jump[k] = diff > 0.0 ? FaceJump::Below : FaceJump::Above;
    r.jump_faces.push_back(k);
    const double sign = diff > 0.0 ? 1.0 : -1.0;
    r.residual[k] = phi_nu - sign * r.trace[k];
    r.max_jump_residual = std::max(r.max_jump_residual, std::abs(r.residual[k]));
    if (r.unsaturated[k]) ++r.jumps_on_unsaturated;
  }
  r.attainment_fraction = total > 0.0 ? attached / total : 1.0;
  return r;
}

std::optional<Vec2> predicted_direction(const Vec2& t_cell, const MetricField& m, int cell, int n_dirs,
                                        double dir_tol) {
  if (n_dirs < 64) throw DomainError("predicted_direction needs at least 64 directions");
  const LocalNorm local = m.at(cell);
  double best = -std::numeric_limits<double>::infinity();
  Vec2 arg{};
  for (int k = 0; k < n_dirs; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n_dirs;
    const Vec2 p{std::cos(a), std::sin(a)};
    const double ratio = dot(t_cell, p) / local.phi(p);
    if (ratio > best) {
      best = ratio;
      arg = p;
    }
  }
  if (best < 1.0 - dir_tol) return std::nullopt;
  return arg;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> boundary_arcs(const DomainMask& mask, const std::vector<std::size_t>& faces) {
  DisjointSets sets(faces.size());
  std::map<std::pair<int, int>, std::size_t> first_at_vertex;
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const auto [p, q] = mask.faces()[faces[k]].endpoints(mask.geometry());
    for (const auto& v : {p, q}) {
      const auto [it, inserted] = first_at_vertex.emplace(v, k);
      if (!inserted) sets.unite(k, it->second);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < faces.size(); ++k) groups[sets.find(k)].push_back(faces[k]);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

const char* to_string(ArcVerdict v) {
  return v == ArcVerdict::NonexistenceIndicator ? "nonexistence indicator" : "inconclusive";
}

std::vector<ArcClassification> nonexistence_diagnostic(const BoundaryJumpReport& report, const ScalarGrid& f,
                                                       const DomainMask& mask, double var_tol) {
  const auto [lo, hi] = boundary_data_range(f, mask);
  const double tol = var_tol * std::max(hi - lo, std::numeric_limits<double>::min());
  std::vector<ArcClassification> out;
  for (auto& arc : boundary_arcs(mask, report.jump_faces)) {
    ArcClassification a;
    a.f_min = std::numeric_limits<double>::infinity();
    a.f_max = -a.f_min;
    for (std::size_t k : arc) {
      const BoundaryFace& face = mask.faces()[k];
      a.measure += face.measure;
      a.f_min = std::min(a.f_min, f[face.exterior_cell]);
      a.f_max = std::max(a.f_max, f[face.exterior_cell]);
    }
    a.variation = a.f_max - a.f_min;
    a.verdict = a.variation > tol ? ArcVerdict::NonexistenceIndicator : ArcVerdict::Inconclusive;
    a.faces = std::move(arc);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Polyline> level_sets(const ScalarGrid& u, const DomainMask& mask, double level) {
  require_same_geometry(u.geometry(), mask.geometry(), "u vs mask");
  const GridGeometry& g = mask.geometry();
  const int nx = g.nx;
  // Edge ids: horizontal edge from centre (i,j) to (i+1,j) is 2c, vertical edge
  // from (i,j) to (i,j+1) is 2c+1.
  std::map<long, Vec2> points;
  std::vector<std::pair<long, long>> segments;
  const auto crossing = [&](int a, int b) {
    const double va = u[a];
    const double vb = u[b];
    const double t = (level - va) / (vb - va);
    return g.center(a) + t * (g.center(b) - g.center(a));
  };
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const int c0 = g.index(i, j), c1 = c0 + 1, c2 = c0 + nx + 1, c3 = c0 + nx;
      if (!mask.interior(c0) || !mask.interior(c1) || !mask.interior(c2) || !mask.interior(c3)) continue;
      const int corner[4] = {c0, c1, c2, c3};
      // Square edges in ring order: bottom, right, top, left.
      const int ea[4] = {c0, c1, c3, c0};
      const int eb[4] = {c1, c2, c2, c3};
      const long eid[4] = {2L * c0, 2L * c1 + 1, 2L * c3, 2L * c0 + 1};
      std::vector<int> hits;
      for (int e = 0; e < 4; ++e) {
        if ((u[ea[e]] > level) != (u[eb[e]] > level)) {
          hits.push_back(e);
          points.emplace(eid[e], crossing(ea[e], eb[e]));
        }
      }
      if (hits.size() == 2) {
        segments.emplace_back(eid[hits[0]], eid[hits[1]]);
      } else if (hits.size() == 4) {
        const double centre = 0.25 * (u[corner[0]] + u[corner[1]] + u[corner[2]] + u[corner[3]]);
        const bool c0_above = u[c0] > level;
        // Join edges around the corners that differ from the centre value.
        if ((centre > level) == c0_above) {
          segments.emplace_back(eid[0], eid[1]);
          segments.emplace_back(eid[2], eid[3]);
        } else {
          segments.emplace_back(eid[0], eid[3]);
          segments.emplace_back(eid[1], eid[2]);
        }
      }
    }
  }
  std::map<long, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }
  std::vector<std::uint8_t> used(segments.size(), 0);
  std::vector<Polyline> out;
  const auto trace_from = [&](long start, std::size_t seg) {
    Polyline line;
    line.points.push_back(points.at(start));
    long at = start;
    while (!used[seg]) {
      used[seg] = 1;
      at = segments[seg].first == at ? segments[seg].second : segments[seg].first;
      line.points.push_back(points.at(at));
      const auto& next = incident.at(at);
      std::size_t cand = seg;
      for (std::size_t s : next) {
        if (!used[s]) cand = s;
      }
      if (cand == seg) break;
      seg = cand;
    }
    line.closed = at == start && line.points.size() > 2;
    if (line.closed) line.points.pop_back();
    return line;
  };
  for (const auto& [edge, segs] : incident) {
    if (segs.size() == 1 && !used[segs[0]]) out.push_back(trace_from(edge, segs[0]));
  }
  for (const auto& [edge, segs] : incident) {
    for (std::size_t s : segs) {
      if (!used[s]) out.push_back(trace_from(edge, s));
    }
  }
  return out;
}

}  // namespace leastgrad
