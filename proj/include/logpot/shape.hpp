#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "logpot/vec2.hpp"

namespace logpot {

struct Shape;

struct Disc {
  Vec2 center;
  double radius = 1.0;
};

/// Concentric annulus: inner < |x - center| < outer.
struct Annulus {
  Vec2 center;
  double outer = 1.0;
  double inner = 0.5;
};

/// B_R(0) minus the closed disc of radius r centred at (t, 0).
struct EccentricAnnulus {
  double outer = 1.0;
  double inner = 0.5;
  double offset = 0.0;
};

/// Ellipse with semi-axes along the directions rotated by `angle`.
struct Ellipse {
  Vec2 center;
  double semi_a = 1.0;
  double semi_b = 1.0;
  double angle = 0.0;
};

struct Rect {
  Vec2 lo;
  Vec2 hi;
};

/// Simple polygon; vertex order may be either orientation.
struct Polygon {
  std::vector<Vec2> vertices;
};

struct Union {
  std::vector<Shape> parts;
};

/// outer minus the closure of obstacle.
struct Difference {
  std::shared_ptr<const Shape> outer;
  std::shared_ptr<const Shape> obstacle;
};

/// Bounded open planar set. Immutable value type.
struct Shape {
  using Variant = std::variant<Disc, Annulus, EccentricAnnulus, Ellipse, Rect, Polygon,
                               Union, Difference>;
  Variant geometry;

  Shape(Disc d) : geometry(std::move(d)) {}
  Shape(Annulus a) : geometry(std::move(a)) {}
  Shape(EccentricAnnulus a) : geometry(std::move(a)) {}
  Shape(Ellipse e) : geometry(std::move(e)) {}
  Shape(Rect r) : geometry(std::move(r)) {}
  Shape(Polygon p) : geometry(std::move(p)) {}
  Shape(Union u) : geometry(std::move(u)) {}
  Shape(Difference d) : geometry(std::move(d)) {}
};

Shape make_difference(Shape outer, Shape obstacle);

struct BBox {
  Vec2 lo;
  Vec2 hi;
};

/// Points of the outer boundary with the arc length each one represents.
struct BoundaryNodes {
  std::vector<Vec2> points;
  std::vector<double> lengths;
};

/// Throws InputError when the shape violates its invariants.
void validate(const Shape& shape);

std::string kind_name(const Shape& shape);

/// Membership in the open set. Points within ~1e-12 of the boundary count as outside.
bool contains(const Shape& shape, Vec2 p);
/// Membership in the closure, with the same tolerance applied outward.
bool contains_closed(const Shape& shape, Vec2 p);

BBox bounds(const Shape& shape);

/// Nearest point of the closure, or nullopt when no cheap projection exists
/// (composite shapes in awkward configurations).
std::optional<Vec2> project_closed(const Shape& shape, Vec2 p);

/// Nearest point of the boundary for primitive shapes; nullopt otherwise.
std::optional<Vec2> project_boundary(const Shape& shape, Vec2 p);

/// Area for shapes with a closed form; nullopt for unions.
std::optional<double> nominal_area(const Shape& shape);

/// Equal arc-length nodes on the outer boundary, or nullopt when the shape
/// has no parameterised outer boundary (unions, obstacles touching the rim).
std::optional<BoundaryNodes> outer_boundary(const Shape& shape, int count);

Shape translated(const Shape& shape, Vec2 v);
/// Rotation about the origin.
Shape rotated(const Shape& shape, double angle);
Shape scaled(const Shape& shape, double factor);

} // namespace logpot
