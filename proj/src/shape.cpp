#include "logpot/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "logpot/error.hpp"

namespace logpot {
namespace {

constexpr double kTol = 1e-12;
constexpr double kPi = std::numbers::pi;

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

bool finite(double v) { return std::isfinite(v); }

double polygon_signed_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) a += cross(v[i], v[(i + 1) % n]);
  return 0.5 * a;
}

Vec2 closest_on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = norm2(d);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return a + t * d;
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on = [](Vec2 p, Vec2 q, Vec2 r, double cr) {
    return cr == 0.0 && std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  return on(a, b, c, d1) || on(a, b, d, d2) || on(c, d, a, d3) || on(c, d, b, d4);
}

double polygon_edge_distance(const std::vector<Vec2>& v, Vec2 p, Vec2* nearest = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Vec2 q = closest_on_segment(p, v[i], v[(i + 1) % n]);
    const double d = distance(p, q);
    if (d < best) {
      best = d;
      if (nearest) *nearest = q;
    }
  }
  return best;
}

bool polygon_crossing(const std::vector<Vec2>& v, Vec2 p) {
  bool inside = false;
  for (std::size_t i = 0, n = v.size(), j = n - 1; i < n; j = i++) {
    const Vec2 a = v[i], b = v[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double polygon_scale(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (const auto& p : v) s = std::max({s, std::abs(p.x), std::abs(p.y)});
  return std::max(s, 1.0);
}

// Bisection root of the Eberly point-ellipse secular equation.
double ellipse_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1.0;
  double s1 = (g < 0.0) ? 0.0 : std::hypot(n0, z1) - 1.0;
  double s = 0.0;
  for (int i = 0; i < 1100; ++i) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) break;
    const double ratio0 = n0 / (s + r0), ratio1 = z1 / (s + 1.0);
    const double gs = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
    if (gs > 0.0) s0 = s;
    else if (gs < 0.0) s1 = s;
    else break;
  }
  return s;
}

// Closest boundary point of the axis-aligned ellipse x^2/e0^2 + y^2/e1^2 = 1
// to (y0, y1), first quadrant, e0 >= e1.
Vec2 ellipse_closest_quadrant(double e0, double e1, double y0, double y1) {
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0, z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return {y0, y1};
      const double r0 = (e0 / e1) * (e0 / e1);
      const double s = ellipse_root(r0, z0, z1, g);
      return {r0 * y0 / (s + r0), y1 / (s + 1.0)};
    }
    return {0.0, e1};
  }
  const double numer0 = e0 * y0, denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    return {e0 * xde0, e1 * std::sqrt(std::max(0.0, 1.0 - xde0 * xde0))};
  }
  return {e0, 0.0};
}

Vec2 ellipse_boundary_point(const Ellipse& e, Vec2 p) {
  Vec2 q = rotated(p - e.center, -e.angle);
  const bool swap = e.semi_a < e.semi_b;
  double e0 = e.semi_a, e1 = e.semi_b;
  if (swap) {
    std::swap(e0, e1);
    std::swap(q.x, q.y);
  }
  Vec2 r = ellipse_closest_quadrant(e0, e1, std::abs(q.x), std::abs(q.y));
  r.x = std::copysign(r.x, q.x);
  r.y = std::copysign(r.y, q.y);
  if (swap) std::swap(r.x, r.y);
  return e.center + rotated(r, e.angle);
}

double ellipse_level(const Ellipse& e, Vec2 p) {
  const Vec2 q = rotated(p - e.center, -e.angle);
  return (q.x / e.semi_a) * (q.x / e.semi_a) + (q.y / e.semi_b) * (q.y / e.semi_b);
}

Vec2 radial_point(Vec2 c, double r, Vec2 p) {
  const Vec2 d = p - c;
  const double n = norm(d);
  if (n == 0.0) return c + Vec2{r, 0.0};
  return c + (r / n) * d;
}

Shape eccentric_as_difference(const EccentricAnnulus& a) {
  return make_difference(Disc{{0.0, 0.0}, a.outer}, Disc{{a.offset, 0.0}, a.inner});
}

std::vector<Vec2> rect_vertices(const Rect& r) {
  return {r.lo, {r.hi.x, r.lo.y}, r.hi, {r.lo.x, r.hi.y}};
}

BoundaryNodes circle_nodes(Vec2 c, double r, int count) {
  BoundaryNodes out;
  out.points.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double th = 2.0 * kPi * (k + 0.5) / count;
    out.points.push_back(c + Vec2{r * std::cos(th), r * std::sin(th)});
  }
  out.lengths.assign(count, 2.0 * kPi * r / count);
  return out;
}

BoundaryNodes polyline_nodes(const std::vector<Vec2>& v, int count) {
  const std::size_t n = v.size();
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + distance(v[i], v[(i + 1) % n]);
  const double total = cum[n];
  BoundaryNodes out;
  std::size_t edge = 0;
  for (int k = 0; k < count; ++k) {
    const double s = total * (k + 0.5) / count;
    while (edge + 1 < n && cum[edge + 1] < s) ++edge;
    const double len = cum[edge + 1] - cum[edge];
    const double t = len > 0.0 ? (s - cum[edge]) / len : 0.0;
    out.points.push_back(v[edge] + t * (v[(edge + 1) % n] - v[edge]));
  }
  out.lengths.assign(count, total / count);
  return out;
}

BoundaryNodes ellipse_nodes(const Ellipse& e, int count) {
  const int samples = 64 * count;
  std::vector<double> cum(samples + 1, 0.0);
  auto speed = [&](double phi) {
    return std::hypot(e.semi_a * std::sin(phi), e.semi_b * std::cos(phi));
  };
  const double dphi = 2.0 * kPi / samples;
  for (int i = 0; i < samples; ++i) {
    const double a = i * dphi;
    cum[i + 1] = cum[i] + dphi / 6.0 * (speed(a) + 4.0 * speed(a + 0.5 * dphi) + speed(a + dphi));
  }
  const double total = cum[samples];
  BoundaryNodes out;
  int seg = 0;
  for (int k = 0; k < count; ++k) {
    const double s = total * (k + 0.5) / count;
    while (seg + 1 < samples && cum[seg + 1] < s) ++seg;
    const double frac = (s - cum[seg]) / (cum[seg + 1] - cum[seg]);
    const double phi = (seg + frac) * dphi;
    const Vec2 local{e.semi_a * std::cos(phi), e.semi_b * std::sin(phi)};
    out.points.push_back(e.center + rotated(local, e.angle));
  }
  out.lengths.assign(count, total / count);
  return out;
}

} // namespace

Shape make_difference(Shape outer, Shape obstacle) {
  return Shape{Difference{std::make_shared<const Shape>(std::move(outer)),
                          std::make_shared<const Shape>(std::move(obstacle))}};
}

std::string kind_name(const Shape& shape) {
  return std::visit(overloaded{
                        [](const Disc&) { return std::string("disc"); },
                        [](const Annulus&) { return std::string("annulus"); },
                        [](const EccentricAnnulus&) { return std::string("eccentric_annulus"); },
                        [](const Ellipse&) { return std::string("ellipse"); },
                        [](const Rect&) { return std::string("rect"); },
                        [](const Polygon&) { return std::string("polygon"); },
                        [](const Union&) { return std::string("union"); },
                        [](const Difference&) { return std::string("difference"); },
                    },
                    shape.geometry);
}

void validate(const Shape& shape) {
  std::visit(
      overloaded{
          [](const Disc& d) {
            if (!is_finite(d.center) || !finite(d.radius) || d.radius <= 0.0)
              throw InputError("disc: radius must be positive and finite");
          },
          [](const Annulus& a) {
            if (!is_finite(a.center) || !finite(a.outer) || !finite(a.inner) || a.inner <= 0.0 ||
                a.inner >= a.outer)
              throw InputError("annulus: need 0 < inner < outer");
          },
          [](const EccentricAnnulus& a) {
            if (!finite(a.outer) || !finite(a.inner) || !finite(a.offset) || a.inner <= 0.0 ||
                a.inner >= a.outer)
              throw InputError("eccentric_annulus: need 0 < inner < outer");
            if (a.offset < 0.0 || a.offset + a.inner >= a.outer)
              throw InputError("eccentric_annulus: need 0 <= offset < outer - inner");
          },
          [](const Ellipse& e) {
            if (!is_finite(e.center) || !finite(e.semi_a) || !finite(e.semi_b) ||
                !finite(e.angle) || e.semi_a <= 0.0 || e.semi_b <= 0.0)
              throw InputError("ellipse: semi-axes must be positive and finite");
          },
          [](const Rect& r) {
            if (!is_finite(r.lo) || !is_finite(r.hi) || !(r.lo.x < r.hi.x) || !(r.lo.y < r.hi.y))
              throw InputError("rect: degenerate (need lo < hi componentwise)");
          },
          [](const Polygon& p) {
            const auto& v = p.vertices;
            if (v.size() < 3) throw InputError("polygon: need at least 3 vertices");
            for (const auto& q : v)
              if (!is_finite(q)) throw InputError("polygon: non-finite vertex");
            if (std::abs(polygon_signed_area(v)) <= 0.0)
              throw InputError("polygon: zero area");
            const std::size_t n = v.size();
            for (std::size_t i = 0; i < n; ++i) {
              if (v[i] == v[(i + 1) % n]) throw InputError("polygon: repeated vertex");
              for (std::size_t j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1) continue;
                if (segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                  throw InputError("polygon: not simple (edges intersect)");
              }
            }
          },
          [](const Union& u) {
            if (u.parts.empty()) throw InputError("union: no parts");
            for (const auto& s : u.parts) validate(s);
          },
          [](const Difference& d) {
            if (!d.outer || !d.obstacle) throw InputError("difference: missing operand");
            validate(*d.outer);
            validate(*d.obstacle);
            const auto a = nominal_area(*d.obstacle);
            if (a && *a <= 0.0) throw InputError("difference: obstacle has zero area");
          },
      },
      shape.geometry);
}

bool contains(const Shape& shape, Vec2 p) {
  return std::visit(
      overloaded{
          [&](const Disc& d) { return norm2(p - d.center) < d.radius * d.radius * (1.0 - kTol); },
          [&](const Annulus& a) {
            const double r2 = norm2(p - a.center);
            return r2 < a.outer * a.outer * (1.0 - kTol) && r2 > a.inner * a.inner * (1.0 + kTol);
          },
          [&](const EccentricAnnulus& a) {
            return norm2(p) < a.outer * a.outer * (1.0 - kTol) &&
                   norm2(p - Vec2{a.offset, 0.0}) > a.inner * a.inner * (1.0 + kTol);
          },
          [&](const Ellipse& e) { return ellipse_level(e, p) < 1.0 - kTol; },
          [&](const Rect& r) {
            const double tx = kTol * std::max(1.0, r.hi.x - r.lo.x);
            const double ty = kTol * std::max(1.0, r.hi.y - r.lo.y);
            return p.x > r.lo.x + tx && p.x < r.hi.x - tx && p.y > r.lo.y + ty &&
                   p.y < r.hi.y - ty;
          },
          [&](const Polygon& poly) {
            if (!polygon_crossing(poly.vertices, p)) return false;
            return polygon_edge_distance(poly.vertices, p) > kTol * polygon_scale(poly.vertices);
          },
          [&](const Union& u) {
            return std::any_of(u.parts.begin(), u.parts.end(),
                               [&](const Shape& s) { return contains(s, p); });
          },
          [&](const Difference& d) {
            return contains(*d.outer, p) && !contains_closed(*d.obstacle, p);
          },
      },
      shape.geometry);
}

bool contains_closed(const Shape& shape, Vec2 p) {
  return std::visit(
      overloaded{
          [&](const Disc& d) { return norm2(p - d.center) <= d.radius * d.radius * (1.0 + kTol); },
          [&](const Annulus& a) {
            const double r2 = norm2(p - a.center);
            return r2 <= a.outer * a.outer * (1.0 + kTol) &&
                   r2 >= a.inner * a.inner * (1.0 - kTol);
          },
          [&](const EccentricAnnulus& a) {
            return norm2(p) <= a.outer * a.outer * (1.0 + kTol) &&
                   norm2(p - Vec2{a.offset, 0.0}) >= a.inner * a.inner * (1.0 - kTol);
          },
          [&](const Ellipse& e) { return ellipse_level(e, p) <= 1.0 + kTol; },
          [&](const Rect& r) {
            const double tx = kTol * std::max(1.0, r.hi.x - r.lo.x);
            const double ty = kTol * std::max(1.0, r.hi.y - r.lo.y);
            return p.x >= r.lo.x - tx && p.x <= r.hi.x + tx && p.y >= r.lo.y - ty &&
                   p.y <= r.hi.y + ty;
          },
          [&](const Polygon& poly) {
            return polygon_crossing(poly.vertices, p) ||
                   polygon_edge_distance(poly.vertices, p) <= kTol * polygon_scale(poly.vertices);
          },
          [&](const Union& u) {
            return std::any_of(u.parts.begin(), u.parts.end(),
                               [&](const Shape& s) { return contains_closed(s, p); });
          },
          [&](const Difference& d) {
            return contains_closed(*d.outer, p) && !contains(*d.obstacle, p);
          },
      },
      shape.geometry);
}

BBox bounds(const Shape& shape) {
  return std::visit(
      overloaded{
          [](const Disc& d) {
            return BBox{d.center - Vec2{d.radius, d.radius}, d.center + Vec2{d.radius, d.radius}};
          },
          [](const Annulus& a) {
            return BBox{a.center - Vec2{a.outer, a.outer}, a.center + Vec2{a.outer, a.outer}};
          },
          [](const EccentricAnnulus& a) {
            return BBox{{-a.outer, -a.outer}, {a.outer, a.outer}};
          },
          [](const Ellipse& e) {
            const double c = std::cos(e.angle), s = std::sin(e.angle);
            const double wx = std::hypot(e.semi_a * c, e.semi_b * s);
            const double wy = std::hypot(e.semi_a * s, e.semi_b * c);
            return BBox{e.center - Vec2{wx, wy}, e.center + Vec2{wx, wy}};
          },
          [](const Rect& r) { return BBox{r.lo, r.hi}; },
          [](const Polygon& p) {
            BBox b{p.vertices.front(), p.vertices.front()};
            for (const auto& v : p.vertices) {
              b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y)};
              b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y)};
            }
            return b;
          },
          [](const Union& u) {
            BBox b = bounds(u.parts.front());
            for (const auto& s : u.parts) {
              const BBox o = bounds(s);
              b.lo = {std::min(b.lo.x, o.lo.x), std::min(b.lo.y, o.lo.y)};
              b.hi = {std::max(b.hi.x, o.hi.x), std::max(b.hi.y, o.hi.y)};
            }
            return b;
          },
          [](const Difference& d) { return bounds(*d.outer); },
      },
      shape.geometry);
}

std::optional<Vec2> project_boundary(const Shape& shape, Vec2 p) {
  return std::visit(
      overloaded{
          [&](const Disc& d) -> std::optional<Vec2> { return radial_point(d.center, d.radius, p); },
          [&](const Annulus& a) -> std::optional<Vec2> {
            const double r = norm(p - a.center);
            const double target = (std::abs(r - a.inner) < std::abs(r - a.outer)) ? a.inner : a.outer;
            return radial_point(a.center, target, p);
          },
          [&](const EccentricAnnulus& a) -> std::optional<Vec2> {
            const Vec2 hole{a.offset, 0.0};
            const Vec2 q1 = radial_point({0.0, 0.0}, a.outer, p);
            const Vec2 q2 = radial_point(hole, a.inner, p);
            return distance(p, q1) <= distance(p, q2) ? q1 : q2;
          },
          [&](const Ellipse& e) -> std::optional<Vec2> { return ellipse_boundary_point(e, p); },
          [&](const Rect& r) -> std::optional<Vec2> {
            Vec2 q;
            polygon_edge_distance(rect_vertices(r), p, &q);
            return q;
          },
          [&](const Polygon& poly) -> std::optional<Vec2> {
            Vec2 q;
            polygon_edge_distance(poly.vertices, p, &q);
            return q;
          },
          [&](const Union&) -> std::optional<Vec2> { return std::nullopt; },
          [&](const Difference&) -> std::optional<Vec2> { return std::nullopt; },
      },
      shape.geometry);
}

std::optional<Vec2> project_closed(const Shape& shape, Vec2 p) {
  if (contains_closed(shape, p)) return p;
  return std::visit(
      overloaded{
          [&](const Disc& d) -> std::optional<Vec2> { return radial_point(d.center, d.radius, p); },
          [&](const Annulus&) { return project_boundary(shape, p); },
          [&](const EccentricAnnulus& a) { return project_closed(eccentric_as_difference(a), p); },
          [&](const Ellipse& e) -> std::optional<Vec2> { return ellipse_boundary_point(e, p); },
          [&](const Rect& r) -> std::optional<Vec2> {
            return Vec2{std::clamp(p.x, r.lo.x, r.hi.x), std::clamp(p.y, r.lo.y, r.hi.y)};
          },
          [&](const Polygon&) { return project_boundary(shape, p); },
          [&](const Union& u) -> std::optional<Vec2> {
            std::optional<Vec2> best;
            for (const auto& s : u.parts) {
              const auto q = project_closed(s, p);
              if (q && (!best || distance(p, *q) < distance(p, *best))) best = q;
            }
            return best;
          },
          [&](const Difference& d) -> std::optional<Vec2> {
            if (contains(*d.obstacle, p)) {
              const auto q = project_boundary(*d.obstacle, p);
              if (q && contains_closed(*d.outer, *q)) return q;
              return std::nullopt;
            }
            const auto q = project_closed(*d.outer, p);
            if (q && !contains(*d.obstacle, *q)) return q;
            return std::nullopt;
          },
      },
      shape.geometry);
}

std::optional<double> nominal_area(const Shape& shape) {
  return std::visit(
      overloaded{
          [](const Disc& d) -> std::optional<double> { return kPi * d.radius * d.radius; },
          [](const Annulus& a) -> std::optional<double> {
            return kPi * (a.outer * a.outer - a.inner * a.inner);
          },
          [](const EccentricAnnulus& a) -> std::optional<double> {
            return kPi * (a.outer * a.outer - a.inner * a.inner);
          },
          [](const Ellipse& e) -> std::optional<double> { return kPi * e.semi_a * e.semi_b; },
          [](const Rect& r) -> std::optional<double> {
            return (r.hi.x - r.lo.x) * (r.hi.y - r.lo.y);
          },
          [](const Polygon& p) -> std::optional<double> {
            return std::abs(polygon_signed_area(p.vertices));
          },
          [](const Union&) -> std::optional<double> { return std::nullopt; },
          [](const Difference& d) -> std::optional<double> {
            const auto a = nominal_area(*d.outer), b = nominal_area(*d.obstacle);
            if (!a || !b) return std::nullopt;
            return *a - *b;
          },
      },
      shape.geometry);
}

std::optional<BoundaryNodes> outer_boundary(const Shape& shape, int count) {
  if (count < 3) throw InputError("outer_boundary: need at least 3 nodes");
  return std::visit(
      overloaded{
          [&](const Disc& d) -> std::optional<BoundaryNodes> {
            return circle_nodes(d.center, d.radius, count);
          },
          [&](const Annulus& a) -> std::optional<BoundaryNodes> {
            return circle_nodes(a.center, a.outer, count);
          },
          [&](const EccentricAnnulus& a) -> std::optional<BoundaryNodes> {
            return circle_nodes({0.0, 0.0}, a.outer, count);
          },
          [&](const Ellipse& e) -> std::optional<BoundaryNodes> { return ellipse_nodes(e, count); },
          [&](const Rect& r) -> std::optional<BoundaryNodes> {
            return polyline_nodes(rect_vertices(r), count);
          },
          [&](const Polygon& p) -> std::optional<BoundaryNodes> {
            return polyline_nodes(p.vertices, count);
          },
          [&](const Union&) -> std::optional<BoundaryNodes> { return std::nullopt; },
          [&](const Difference& d) -> std::optional<BoundaryNodes> {
            auto nodes = outer_boundary(*d.outer, count);
            if (!nodes) return std::nullopt;
            for (const auto& q : nodes->points)
              if (contains_closed(*d.obstacle, q)) return std::nullopt;
            return nodes;
          },
      },
      shape.geometry);
}

Shape translated(const Shape& shape, Vec2 v) {
  return std::visit(
      overloaded{
          [&](const Disc& d) -> Shape { return Disc{d.center + v, d.radius}; },
          [&](const Annulus& a) -> Shape { return Annulus{a.center + v, a.outer, a.inner}; },
          [&](const EccentricAnnulus& a) -> Shape {
            return translated(eccentric_as_difference(a), v);
          },
          [&](const Ellipse& e) -> Shape { return Ellipse{e.center + v, e.semi_a, e.semi_b, e.angle}; },
          [&](const Rect& r) -> Shape { return Rect{r.lo + v, r.hi + v}; },
          [&](const Polygon& p) -> Shape {
            Polygon q = p;
            for (auto& x : q.vertices) x += v;
            return q;
          },
          [&](const Union& u) -> Shape {
            Union w;
            for (const auto& s : u.parts) w.parts.push_back(translated(s, v));
            return w;
          },
          [&](const Difference& d) -> Shape {
            return make_difference(translated(*d.outer, v), translated(*d.obstacle, v));
          },
      },
      shape.geometry);
}

Shape rotated(const Shape& shape, double angle) {
  return std::visit(
      overloaded{
          [&](const Disc& d) -> Shape { return Disc{logpot::rotated(d.center, angle), d.radius}; },
          [&](const Annulus& a) -> Shape {
            return Annulus{logpot::rotated(a.center, angle), a.outer, a.inner};
          },
          [&](const EccentricAnnulus& a) -> Shape {
            return rotated(eccentric_as_difference(a), angle);
          },
          [&](const Ellipse& e) -> Shape {
            return Ellipse{logpot::rotated(e.center, angle), e.semi_a, e.semi_b, e.angle + angle};
          },
          [&](const Rect& r) -> Shape {
            Polygon p{rect_vertices(r)};
            for (auto& x : p.vertices) x = logpot::rotated(x, angle);
            return p;
          },
          [&](const Polygon& p) -> Shape {
            Polygon q = p;
            for (auto& x : q.vertices) x = logpot::rotated(x, angle);
            return q;
          },
          [&](const Union& u) -> Shape {
            Union w;
            for (const auto& s : u.parts) w.parts.push_back(rotated(s, angle));
            return w;
          },
          [&](const Difference& d) -> Shape {
            return make_difference(rotated(*d.outer, angle), rotated(*d.obstacle, angle));
          },
      },
      shape.geometry);
}

Shape scaled(const Shape& shape, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("scaled: factor must be positive");
  return std::visit(
      overloaded{
          [&](const Disc& d) -> Shape { return Disc{c * d.center, c * d.radius}; },
          [&](const Annulus& a) -> Shape { return Annulus{c * a.center, c * a.outer, c * a.inner}; },
          [&](const EccentricAnnulus& a) -> Shape {
            return EccentricAnnulus{c * a.outer, c * a.inner, c * a.offset};
          },
          [&](const Ellipse& e) -> Shape {
            return Ellipse{c * e.center, c * e.semi_a, c * e.semi_b, e.angle};
          },
          [&](const Rect& r) -> Shape { return Rect{c * r.lo, c * r.hi}; },
          [&](const Polygon& p) -> Shape {
            Polygon q = p;
            for (auto& x : q.vertices) x *= c;
            return q;
          },
          [&](const Union& u) -> Shape {
            Union w;
            for (const auto& s : u.parts) w.parts.push_back(scaled(s, c));
            return w;
          },
          [&](const Difference& d) -> Shape {
            return make_difference(scaled(*d.outer, c), scaled(*d.obstacle, c));
          },
      },
      shape.geometry);
}

} // namespace logpot
