#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "leastgrad/vec2.hpp"

namespace leastgrad {

struct Disk {
  Vec2 center{};
  double radius = 1.0;
};

struct Annulus {
  Vec2 center{};
  double inner = 0.5;
  double outer = 1.0;
};

/// Axis-aligned rectangle [corner.x, corner.x + width] x [corner.y, corner.y + height].
struct Box {
  double width = 1.0;
  double height = 1.0;
  Vec2 corner{};
};

/// Simple polygon, vertices in order (either orientation).
struct Polygon {
  std::vector<Vec2> vertices;
};

using Shape = std::variant<Disk, Annulus, Box, Polygon>;

struct BoundingBox {
  Vec2 lo;
  Vec2 hi;
};

bool contains(const Shape& s, const Vec2& p);
BoundingBox bounding_box(const Shape& s);
/// Positive inside, negative outside, exact for every shape kind.
double signed_distance(const Shape& s, const Vec2& p);

/// Parses "disk:cx,cy,r", "disk:r", "annulus:r0,r1", "annulus:cx,cy,r0,r1",
/// "box:w,h", "box:w,h,x0,y0" and "polygon:x1,y1,x2,y2,...".
Shape parse_shape(std::string_view text);
std::string to_string(const Shape& s);

}  // namespace leastgrad
