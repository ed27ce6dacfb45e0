#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "leastgrad/shapes.hpp"
#include "leastgrad/vec2.hpp"

namespace leastgrad {

/// Uniform cell-centred grid. Cell (i, j) has centre origin + ((i+1/2)h, (j+1/2)h)
/// and linear index j*nx + i (row-major, rows bottom to top).
struct GridGeometry {
  int nx = 0;
  int ny = 0;
  double h = 1.0;
  Vec2 origin{};

  int cells() const { return nx * ny; }
  int index(int i, int j) const { return j * nx + i; }
  int col(int c) const { return c % nx; }
  int row(int c) const { return c / nx; }
  Vec2 center(int i, int j) const { return {origin.x + (i + 0.5) * h, origin.y + (j + 0.5) * h}; }
  Vec2 center(int c) const { return center(col(c), row(c)); }
  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

/// Throws DimensionError unless both geometries are identical.
void require_same_geometry(const GridGeometry& a, const GridGeometry& b, const char* what);

class ScalarGrid {
 public:
  ScalarGrid() = default;
  explicit ScalarGrid(GridGeometry g, double fill = 0.0)
      : geom_(g), values_(static_cast<std::size_t>(g.cells()), fill) {}

  const GridGeometry& geometry() const { return geom_; }
  double& operator[](int c) { return values_[static_cast<std::size_t>(c)]; }
  double operator[](int c) const { return values_[static_cast<std::size_t>(c)]; }
  double& at(int i, int j) { return (*this)[geom_.index(i, j)]; }
  double at(int i, int j) const { return (*this)[geom_.index(i, j)]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const ScalarGrid&, const ScalarGrid&) = default;

 private:
  GridGeometry geom_;
  std::vector<double> values_;
};

class VectorGrid {
 public:
  VectorGrid() = default;
  explicit VectorGrid(GridGeometry g, Vec2 fill = {})
      : geom_(g), values_(static_cast<std::size_t>(g.cells()), fill) {}

  const GridGeometry& geometry() const { return geom_; }
  Vec2& operator[](int c) { return values_[static_cast<std::size_t>(c)]; }
  const Vec2& operator[](int c) const { return values_[static_cast<std::size_t>(c)]; }
  std::span<Vec2> values() { return values_; }
  std::span<const Vec2> values() const { return values_; }

  ScalarGrid component_x() const;
  ScalarGrid component_y() const;
  static VectorGrid from_components(const ScalarGrid& x, const ScalarGrid& y);

  friend bool operator==(const VectorGrid&, const VectorGrid&) = default;

 private:
  GridGeometry geom_;
  std::vector<Vec2> values_;
};

enum class FaceDir : std::uint8_t { East, West, North, South };

const char* to_string(FaceDir d);

/// A cell face separating one interior and one exterior cell.
struct BoundaryFace {
  int interior_cell = 0;
  int exterior_cell = 0;
  FaceDir dir = FaceDir::East;
  Vec2 normal{};  // outward, axis aligned
  double measure = 0.0;

  /// Lattice coordinates of the two face end points (grid vertex indices).
  std::pair<std::pair<int, int>, std::pair<int, int>> endpoints(const GridGeometry& g) const;
};

/// One scalar per boundary face, in DomainMask::faces() order.
struct BoundaryField {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }
};

/// Discrete domain. Interior cells never touch the grid border, so every
/// interior cell has four neighbours.
class DomainMask {
 public:
  DomainMask() = default;
  /// Throws InvalidShapeError on an empty interior or interior cells on the border.
  DomainMask(GridGeometry g, std::vector<std::uint8_t> flags);

  const GridGeometry& geometry() const { return geom_; }
  bool interior(int c) const { return interior_[static_cast<std::size_t>(c)] != 0; }
  bool interior(int i, int j) const { return geom_.contains(i, j) && interior(geom_.index(i, j)); }
  std::span<const std::uint8_t> flags() const { return interior_; }
  const std::vector<int>& interior_cells() const { return interior_cells_; }
  const std::vector<BoundaryFace>& faces() const { return faces_; }
  double boundary_measure() const { return static_cast<double>(faces_.size()) * geom_.h; }

  /// The x-component of the forward stencil at c crosses a face with at least
  /// one interior side. Interior cells are always active; exterior cells only
  /// when their east (resp. north) neighbour is interior.
  bool x_active(int c) const;
  bool y_active(int c) const;
  /// Cells that carry at least one active component.
  const std::vector<int>& host_cells() const { return host_cells_; }

  /// 4-connectivity of the interior.
  bool connected() const;
  /// Diagonal of the interior's bounding box, measured on cell extents.
  double diameter() const;

  friend bool operator==(const DomainMask& a, const DomainMask& b) {
    return a.geom_ == b.geom_ && a.interior_ == b.interior_;
  }

 private:
  GridGeometry geom_;
  std::vector<std::uint8_t> interior_;
  std::vector<int> interior_cells_;
  std::vector<int> host_cells_;
  std::vector<BoundaryFace> faces_;
};

/// Ghost padding added around a shape's bounding box.
inline constexpr int kGhostPadding = 3;

/// Rasterises `shape` with `n` cells per unit length: a cell is interior iff
/// its centre lies inside the shape.
DomainMask build_mask(const Shape& shape, int n);

/// 0/1 field of `shape` sampled on an existing grid, e.g. a set E inside a domain.
ScalarGrid indicator(const Shape& shape, const GridGeometry& g);

/// Forward differences at every host cell. Interior values come from `u`,
/// exterior values from `f`. Inactive components are zero.
VectorGrid gradient(const ScalarGrid& u, const ScalarGrid& f, const DomainMask& mask);
/// Same, with exterior values read from `u` itself.
VectorGrid gradient(const ScalarGrid& u, const DomainMask& mask);

/// Backward-difference divergence on interior cells (zero elsewhere); the
/// negative adjoint of `gradient` for zero ghost data.
ScalarGrid divergence(const VectorGrid& v, const DomainMask& mask);

/// Discrete normal trace [V, nu] per boundary face, outward positive. East and
/// north faces read the interior cell's component, west and south faces the
/// exterior host cell's component.
BoundaryField boundary_trace(const VectorGrid& v, const DomainMask& mask);

/// |sum_faces h u_ext [V,nu] - h^2 <u, div V> - h^2 <V, Gu>| divided by the
/// largest of the three magnitudes (1 when all vanish). Ghost values of u are
/// read from u's exterior cells.
double green_identity_residual(const ScalarGrid& u, const VectorGrid& v, const DomainMask& mask);

/// Absolute (unnormalised) terms of the Green identity, for inspection.
struct GreenTerms {
  double boundary = 0.0;
  double divergence = 0.0;
  double pairing = 0.0;
};
GreenTerms green_identity_terms(const ScalarGrid& u, const VectorGrid& v, const DomainMask& mask);

/// Power-method estimate of ||G||^2 in the h^2-weighted inner products.
double gradient_norm_sq_estimate(const DomainMask& mask, int iterations, std::uint64_t seed = 7);

/// Values of `f` at the exterior cell of each face.
BoundaryField exterior_values(const ScalarGrid& f, const DomainMask& mask);
/// Values of `u` at the interior cell of each face.
BoundaryField interior_values(const ScalarGrid& u, const DomainMask& mask);

/// Copy of `u` with exterior cells replaced by `f`.
ScalarGrid with_ghosts(const ScalarGrid& u, const ScalarGrid& f, const DomainMask& mask);

/// Samples a function of position at every cell centre.
template <class Fn>
ScalarGrid sample(const GridGeometry& g, Fn&& fn) {
  ScalarGrid out(g);
  for (int c = 0; c < g.cells(); ++c) out[c] = fn(g.center(c));
  return out;
}

}  // namespace leastgrad
