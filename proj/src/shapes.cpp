#include "leastgrad/shapes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "leastgrad/errors.hpp"

namespace leastgrad {

namespace {

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

bool polygon_contains(const Polygon& poly, const Vec2& p) {
  bool inside = false;
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x_cross = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

double box_signed_distance(const Box& b, const Vec2& p) {
  const Vec2 c{b.corner.x + 0.5 * b.width, b.corner.y + 0.5 * b.height};
  const double qx = std::abs(p.x - c.x) - 0.5 * b.width;
  const double qy = std::abs(p.y - c.y) - 0.5 * b.height;
  if (qx <= 0.0 && qy <= 0.0) return -std::max(qx, qy);
  return -std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
}

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string token(text.substr(pos, comma - pos));
    token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char ch) { return std::isspace(ch); }),
                token.end());
    if (token.empty()) throw InvalidShapeError("empty number in shape string");
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(value)) {
      throw InvalidShapeError("bad number '" + token + "' in shape string");
    }
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

bool contains(const Shape& s, const Vec2& p) {
  return std::visit(
      [&](const auto& sh) -> bool {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return norm(p - sh.center) < sh.radius;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          const double r = norm(p - sh.center);
          return r > sh.inner && r < sh.outer;
        } else if constexpr (std::is_same_v<T, Box>) {
          return p.x > sh.corner.x && p.x < sh.corner.x + sh.width && p.y > sh.corner.y &&
                 p.y < sh.corner.y + sh.height;
        } else {
          return polygon_contains(sh, p);
        }
      },
      s);
}

BoundingBox bounding_box(const Shape& s) {
  return std::visit(
      [](const auto& sh) -> BoundingBox {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return {{sh.center.x - sh.radius, sh.center.y - sh.radius},
                  {sh.center.x + sh.radius, sh.center.y + sh.radius}};
        } else if constexpr (std::is_same_v<T, Annulus>) {
          return {{sh.center.x - sh.outer, sh.center.y - sh.outer},
                  {sh.center.x + sh.outer, sh.center.y + sh.outer}};
        } else if constexpr (std::is_same_v<T, Box>) {
          return {sh.corner, {sh.corner.x + sh.width, sh.corner.y + sh.height}};
        } else {
          BoundingBox b{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
                        {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}};
          for (const auto& v : sh.vertices) {
            b.lo.x = std::min(b.lo.x, v.x);
            b.lo.y = std::min(b.lo.y, v.y);
            b.hi.x = std::max(b.hi.x, v.x);
            b.hi.y = std::max(b.hi.y, v.y);
          }
          return b;
        }
      },
      s);
}

double signed_distance(const Shape& s, const Vec2& p) {
  return std::visit(
      [&](const auto& sh) -> double {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return sh.radius - norm(p - sh.center);
        } else if constexpr (std::is_same_v<T, Annulus>) {
          const double r = norm(p - sh.center);
          return std::min(r - sh.inner, sh.outer - r);
        } else if constexpr (std::is_same_v<T, Box>) {
          return box_signed_distance(sh, p);
        } else {
          double d = std::numeric_limits<double>::max();
          const auto& v = sh.vertices;
          for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
            d = std::min(d, segment_distance(p, v[j], v[i]));
          }
          return polygon_contains(sh, p) ? d : -d;
        }
      },
      s);
}

Shape parse_shape(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidShapeError("shape string needs 'kind:params'");
  const std::string_view kind = text.substr(0, colon);
  const std::vector<double> v = parse_numbers(text.substr(colon + 1));
  if (kind == "disk") {
    if (v.size() == 1 && v[0] > 0) return Disk{{0.0, 0.0}, v[0]};
    if (v.size() == 3 && v[2] > 0) return Disk{{v[0], v[1]}, v[2]};
    throw InvalidShapeError("disk expects r or cx,cy,r with r > 0");
  }
  if (kind == "annulus") {
    if (v.size() == 2 && 0 < v[0] && v[0] < v[1]) return Annulus{{0.0, 0.0}, v[0], v[1]};
    if (v.size() == 4 && 0 < v[2] && v[2] < v[3]) return Annulus{{v[0], v[1]}, v[2], v[3]};
    throw InvalidShapeError("annulus expects r0,r1 or cx,cy,r0,r1 with 0 < r0 < r1");
  }
  if (kind == "box") {
    if (v.size() == 2 && v[0] > 0 && v[1] > 0) return Box{v[0], v[1], {0.0, 0.0}};
    if (v.size() == 4 && v[0] > 0 && v[1] > 0) return Box{v[0], v[1], {v[2], v[3]}};
    throw InvalidShapeError("box expects w,h or w,h,x0,y0 with positive sides");
  }
  if (kind == "polygon") {
    if (v.size() < 6 || v.size() % 2 != 0) throw InvalidShapeError("polygon expects at least 3 x,y pairs");
    Polygon p;
    for (std::size_t k = 0; k < v.size(); k += 2) p.vertices.push_back({v[k], v[k + 1]});
    return p;
  }
  throw InvalidShapeError("unknown shape kind '" + std::string(kind) + "'");
}

std::string to_string(const Shape& s) {
  return std::visit(
      [](const auto& sh) -> std::string {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return "disk:" + fmt(sh.center.x) + "," + fmt(sh.center.y) + "," + fmt(sh.radius);
        } else if constexpr (std::is_same_v<T, Annulus>) {
          return "annulus:" + fmt(sh.center.x) + "," + fmt(sh.center.y) + "," + fmt(sh.inner) + "," +
                 fmt(sh.outer);
        } else if constexpr (std::is_same_v<T, Box>) {
          return "box:" + fmt(sh.width) + "," + fmt(sh.height) + "," + fmt(sh.corner.x) + "," + fmt(sh.corner.y);
        } else {
          std::string out = "polygon:";
          for (std::size_t k = 0; k < sh.vertices.size(); ++k) {
            if (k) out += ",";
            out += fmt(sh.vertices[k].x) + "," + fmt(sh.vertices[k].y);
          }
          return out;
        }
      },
      s);
}

}  // namespace leastgrad
