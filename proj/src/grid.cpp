#include "leastgrad/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "leastgrad/errors.hpp"
#include "leastgrad/summation.hpp"

namespace leastgrad {

void require_same_geometry(const GridGeometry& a, const GridGeometry& b, const char* what) {
  if (!(a == b)) {
    throw DimensionError(std::string("grid geometry mismatch: ") + what);
  }
}

ScalarGrid VectorGrid::component_x() const {
  ScalarGrid out(geom_);
  for (int c = 0; c < geom_.cells(); ++c) out[c] = (*this)[c].x;
  return out;
}

ScalarGrid VectorGrid::component_y() const {
  ScalarGrid out(geom_);
  for (int c = 0; c < geom_.cells(); ++c) out[c] = (*this)[c].y;
  return out;
}

VectorGrid VectorGrid::from_components(const ScalarGrid& x, const ScalarGrid& y) {
  require_same_geometry(x.geometry(), y.geometry(), "vector components");
  VectorGrid out(x.geometry());
  for (int c = 0; c < x.geometry().cells(); ++c) out[c] = {x[c], y[c]};
  return out;
}

const char* to_string(FaceDir d) {
  switch (d) {
    case FaceDir::East:
      return "east";
    case FaceDir::West:
      return "west";
    case FaceDir::North:
      return "north";
    case FaceDir::South:
      return "south";
  }
  return "?";
}

std::pair<std::pair<int, int>, std::pair<int, int>> BoundaryFace::endpoints(const GridGeometry& g) const {
  const int i = g.col(interior_cell);
  const int j = g.row(interior_cell);
  switch (dir) {
    case FaceDir::East:
      return {{i + 1, j}, {i + 1, j + 1}};
    case FaceDir::West:
      return {{i, j}, {i, j + 1}};
    case FaceDir::North:
      return {{i, j + 1}, {i + 1, j + 1}};
    case FaceDir::South:
      return {{i, j}, {i + 1, j}};
  }
  return {};
}

DomainMask::DomainMask(GridGeometry g, std::vector<std::uint8_t> flags)
    : geom_(g), interior_(std::move(flags)) {
  if (g.nx < 3 || g.ny < 3 || !(g.h > 0.0)) throw InvalidShapeError("degenerate grid geometry");
  if (interior_.size() != static_cast<std::size_t>(g.cells())) {
    throw DimensionError("mask flag count does not match grid");
  }
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.index(i, j);
      if (!interior(c)) continue;
      if (i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1) {
        throw InvalidShapeError("interior cell on the grid border; pad the grid with exterior cells");
      }
      interior_cells_.push_back(c);
    }
  }
  if (interior_cells_.empty()) throw InvalidShapeError("shape has an empty interior at this resolution");

  for (int c = 0; c < g.cells(); ++c) {
    if (x_active(c) || y_active(c)) host_cells_.push_back(c);
  }

  const Vec2 ex{1.0, 0.0};
  const Vec2 ey{0.0, 1.0};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int a = g.index(i, j);
      const int b = g.index(i + 1, j);
      if (interior(a) && !interior(b)) faces_.push_back({a, b, FaceDir::East, ex, g.h});
      if (!interior(a) && interior(b)) faces_.push_back({b, a, FaceDir::West, -ex, g.h});
    }
  }
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int a = g.index(i, j);
      const int b = g.index(i, j + 1);
      if (interior(a) && !interior(b)) faces_.push_back({a, b, FaceDir::North, ey, g.h});
      if (!interior(a) && interior(b)) faces_.push_back({b, a, FaceDir::South, -ey, g.h});
    }
  }
}

bool DomainMask::x_active(int c) const {
  if (interior(c)) return true;
  const int i = geom_.col(c);
  return i + 1 < geom_.nx && interior(c + 1);
}

bool DomainMask::y_active(int c) const {
  if (interior(c)) return true;
  const int j = geom_.row(c);
  return j + 1 < geom_.ny && interior(c + geom_.nx);
}

bool DomainMask::connected() const {
  std::vector<std::uint8_t> seen(interior_.size(), 0);
  std::vector<int> stack{interior_cells_.front()};
  seen[static_cast<std::size_t>(stack.back())] = 1;
  std::size_t count = 0;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    ++count;
    const int i = geom_.col(c);
    const int j = geom_.row(c);
    const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
    for (const auto& n : nb) {
      if (!interior(n[0], n[1])) continue;
      const int d = geom_.index(n[0], n[1]);
      if (seen[static_cast<std::size_t>(d)]) continue;
      seen[static_cast<std::size_t>(d)] = 1;
      stack.push_back(d);
    }
  }
  return count == interior_cells_.size();
}

double DomainMask::diameter() const {
  int i0 = geom_.nx, i1 = -1, j0 = geom_.ny, j1 = -1;
  for (int c : interior_cells_) {
    i0 = std::min(i0, geom_.col(c));
    i1 = std::max(i1, geom_.col(c));
    j0 = std::min(j0, geom_.row(c));
    j1 = std::max(j1, geom_.row(c));
  }
  return geom_.h * std::hypot(i1 - i0 + 1, j1 - j0 + 1);
}

DomainMask build_mask(const Shape& shape, int n) {
  if (n < 8) throw InvalidShapeError("resolution must be at least 8 cells per unit length");
  const BoundingBox bb = bounding_box(shape);
  const double h = 1.0 / n;
  const auto cells_across = [&](double extent) {
    return std::max(1, static_cast<int>(std::ceil(extent / h - 1e-9)));
  };
  GridGeometry g;
  g.h = h;
  g.nx = cells_across(bb.hi.x - bb.lo.x) + 2 * kGhostPadding;
  g.ny = cells_across(bb.hi.y - bb.lo.y) + 2 * kGhostPadding;
  g.origin = {bb.lo.x - kGhostPadding * h, bb.lo.y - kGhostPadding * h};
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(g.cells()), 0);
  for (int c = 0; c < g.cells(); ++c) flags[static_cast<std::size_t>(c)] = contains(shape, g.center(c)) ? 1 : 0;
  return DomainMask(g, std::move(flags));
}

ScalarGrid indicator(const Shape& shape, const GridGeometry& g) {
  return sample(g, [&](const Vec2& p) { return contains(shape, p) ? 1.0 : 0.0; });
}

namespace {

// Forward stencil at host cells; `ghost` supplies values at exterior cells.
VectorGrid forward_gradient(const ScalarGrid& u, const ScalarGrid& ghost, const DomainMask& mask) {
  const GridGeometry& g = mask.geometry();
  const double inv_h = 1.0 / g.h;
  VectorGrid out(g);
  const auto value = [&](int c) { return mask.interior(c) ? u[c] : ghost[c]; };
  for (int c : mask.host_cells()) {
    const double uc = value(c);
    Vec2 d{};
    if (mask.x_active(c)) d.x = (value(c + 1) - uc) * inv_h;
    if (mask.y_active(c)) d.y = (value(c + g.nx) - uc) * inv_h;
    out[c] = d;
  }
  return out;
}

}  // namespace

VectorGrid gradient(const ScalarGrid& u, const ScalarGrid& f, const DomainMask& mask) {
  require_same_geometry(u.geometry(), mask.geometry(), "gradient(u)");
  require_same_geometry(f.geometry(), mask.geometry(), "gradient(f)");
  return forward_gradient(u, f, mask);
}

VectorGrid gradient(const ScalarGrid& u, const DomainMask& mask) { return gradient(u, u, mask); }

ScalarGrid divergence(const VectorGrid& v, const DomainMask& mask) {
  require_same_geometry(v.geometry(), mask.geometry(), "divergence");
  const GridGeometry& g = mask.geometry();
  const double inv_h = 1.0 / g.h;
  ScalarGrid out(g);
  for (int c : mask.interior_cells()) {
    out[c] = (v[c].x - v[c - 1].x) * inv_h + (v[c].y - v[c - g.nx].y) * inv_h;
  }
  return out;
}

BoundaryField boundary_trace(const VectorGrid& v, const DomainMask& mask) {
  require_same_geometry(v.geometry(), mask.geometry(), "boundary_trace");
  BoundaryField out;
  out.values.reserve(mask.faces().size());
  for (const BoundaryFace& f : mask.faces()) {
    switch (f.dir) {
      case FaceDir::East:
        out.values.push_back(v[f.interior_cell].x);
        break;
      case FaceDir::North:
        out.values.push_back(v[f.interior_cell].y);
        break;
      case FaceDir::West:
        out.values.push_back(-v[f.exterior_cell].x);
        break;
      case FaceDir::South:
        out.values.push_back(-v[f.exterior_cell].y);
        break;
    }
  }
  return out;
}

GreenTerms green_identity_terms(const ScalarGrid& u, const VectorGrid& v, const DomainMask& mask) {
  require_same_geometry(u.geometry(), mask.geometry(), "green identity (u)");
  const double h = mask.geometry().h;
  const BoundaryField trace = boundary_trace(v, mask);
  std::vector<double> terms;
  terms.reserve(mask.faces().size());
  for (std::size_t k = 0; k < mask.faces().size(); ++k) {
    terms.push_back(h * u[mask.faces()[k].exterior_cell] * trace[k]);
  }
  GreenTerms out;
  out.boundary = pairwise_sum(terms);

  const ScalarGrid div = divergence(v, mask);
  terms.clear();
  for (int c : mask.interior_cells()) terms.push_back(h * h * u[c] * div[c]);
  out.divergence = pairwise_sum(terms);

  const VectorGrid grad = gradient(u, mask);
  terms.clear();
  for (int c : mask.host_cells()) terms.push_back(h * h * dot(v[c], grad[c]));
  out.pairing = pairwise_sum(terms);
  return out;
}

double green_identity_residual(const ScalarGrid& u, const VectorGrid& v, const DomainMask& mask) {
  const GreenTerms t = green_identity_terms(u, v, mask);
  const double scale = std::max({std::abs(t.boundary), std::abs(t.divergence), std::abs(t.pairing)});
  const double r = std::abs(t.boundary - t.divergence - t.pairing);
  return scale > 0.0 ? r / scale : r;
}

double gradient_norm_sq_estimate(const DomainMask& mask, int iterations, std::uint64_t seed) {
  const GridGeometry& g = mask.geometry();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ScalarGrid x(g);
  for (int c : mask.interior_cells()) x[c] = dist(rng);
  const ScalarGrid zero(g);
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double nx2 = 0.0;
    for (int c : mask.interior_cells()) nx2 += x[c] * x[c];
    const double inv = 1.0 / std::sqrt(nx2);
    for (int c : mask.interior_cells()) x[c] *= inv;
    const VectorGrid gx = gradient(x, zero, mask);
    double ng2 = 0.0;
    for (int c : mask.host_cells()) ng2 += dot(gx[c], gx[c]);
    estimate = ng2;
    const ScalarGrid d = divergence(gx, mask);
    for (int c : mask.interior_cells()) x[c] = -d[c];
  }
  return estimate;
}

BoundaryField exterior_values(const ScalarGrid& f, const DomainMask& mask) {
  require_same_geometry(f.geometry(), mask.geometry(), "exterior_values");
  BoundaryField out;
  out.values.reserve(mask.faces().size());
  for (const auto& face : mask.faces()) out.values.push_back(f[face.exterior_cell]);
  return out;
}

BoundaryField interior_values(const ScalarGrid& u, const DomainMask& mask) {
  require_same_geometry(u.geometry(), mask.geometry(), "interior_values");
  BoundaryField out;
  out.values.reserve(mask.faces().size());
  for (const auto& face : mask.faces()) out.values.push_back(u[face.interior_cell]);
  return out;
}

ScalarGrid with_ghosts(const ScalarGrid& u, const ScalarGrid& f, const DomainMask& mask) {
  require_same_geometry(u.geometry(), mask.geometry(), "with_ghosts(u)");
  require_same_geometry(f.geometry(), mask.geometry(), "with_ghosts(f)");
  ScalarGrid out = f;
  for (int c : mask.interior_cells()) out[c] = u[c];
  return out;
}

}  // namespace leastgrad
