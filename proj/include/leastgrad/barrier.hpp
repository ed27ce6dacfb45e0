#pragma once

#include <optional>
#include <vector>

#include "leastgrad/grid.hpp"
#include "leastgrad/metric.hpp"
#include "leastgrad/shapes.hpp"

namespace leastgrad {

/// Exact signed distance of `shape` at every cell centre, positive inside.
ScalarGrid signed_distance_field(const Shape& shape, const GridGeometry& g);

/// Fast-sweeping approximation from the mask alone. Cells next to a boundary
/// face start at h/2; the sign follows the interior flag.
ScalarGrid signed_distance_field(const DomainMask& mask);

enum class FaceClass { Pass, Fail, Marginal };

const char* to_string(FaceClass c);

struct BarrierReport {
  /// S = -div_h phi_xi(x, grad_h d) on interior cells within the band, 0 elsewhere.
  ScalarGrid band_values;
  /// S carried to each face from its interior cell (constant along the normal).
  BoundaryField S;
  /// Faces whose stencil meets a cell with ||grad_h d| - 1| > kink_tol
  /// (medial axis, corners); classified marginal regardless of S.
  std::vector<std::uint8_t> unreliable;
  std::vector<FaceClass> classes;
  double delta = 0.0;
  double band_width = 0.0;
  double pass_fraction = 0.0;
  double fail_fraction = 0.0;
  double marginal_fraction = 0.0;
};

/// Evaluates the sufficient condition -sum_i d/dx_i phi_xi_i(x, Dd) > 0 near
/// the boundary with centred differences. Throws InvalidMetricError for the
/// crystalline kinds, whose phi is not differentiable. Defaults: band 4h,
/// delta 10h.
BarrierReport barrier_indicator(const MetricField& m, const ScalarGrid& d, const DomainMask& mask,
                                std::optional<double> band_width = std::nullopt,
                                std::optional<double> delta = std::nullopt, double kink_tol = 0.05);

/// Reclassifies faces with a new threshold.
void reclassify(BarrierReport& report, double delta);

enum class BarrierVerdict { Holds, Fails, Inconclusive };

const char* to_string(BarrierVerdict v);

struct BoundaryComponentSummary {
  std::vector<std::size_t> faces;
  double measure = 0.0;
  double pass_fraction = 0.0;
  double fail_fraction = 0.0;
  double marginal_fraction = 0.0;
  double mean_S = 0.0;
};

struct BarrierSummary {
  std::vector<BoundaryComponentSummary> components;
  BarrierVerdict verdict = BarrierVerdict::Inconclusive;
};

/// Groups faces into connected boundary components. The sufficient condition
/// holds when every component passes on at least 90% of its faces and fails
/// when some component fails on more than half; anything else is inconclusive.
BarrierSummary classify(const BarrierReport& report, const DomainMask& mask);

}  // namespace leastgrad
