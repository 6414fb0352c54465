#pragma once

#include <optional>

#include "logpot/mask.hpp"
#include "logpot/vec2.hpp"

namespace logpot {

/// Integer form of a reflection that permutes the lattice anchor + h Z^2:
/// (col, row) -> (m00 col + m01 row + c0, m10 col + m11 row + c1).
struct LatticeReflection {
  Vec2 anchor;
  double h = 0.0;
  int m00 = 1, m01 = 0, m10 = 0, m11 = 1;
  long c0 = 0, c1 = 0;

  Cell apply(Cell c) const {
    return {m00 * c.col + m01 * c.row + c0, m10 * c.col + m11 * c.row + c1};
  }
  /// +1 inside the open half-space, -1 strictly outside, 0 on its boundary line.
  int side(Cell c, Vec2 normal) const;
};

/// Half-space H = {x : x . a > s} with unit normal a and offset s.
class Polarizer {
public:
  /// Arbitrary half-space; not usable for discrete rearrangements.
  static Polarizer make(Vec2 normal, double offset);

  /// Half-space whose reflection maps the centres of anchor + h Z^2 onto
  /// themselves (default anchor: pixel_anchor(h)). The normal must be
  /// (+-1,0), (0,+-1) or (+-1,+-1)/sqrt(2); axis offsets must be multiples of
  /// h/2 relative to the anchor and diagonal lines must pass through cell centres.
  static Polarizer on_grid(Vec2 normal, double offset, double h, std::optional<Vec2> anchor = std::nullopt);

  Vec2 normal() const { return a_; }
  double offset() const { return s_; }
  bool grid_compatible() const { return lattice_.has_value(); }
  const std::optional<LatticeReflection>& lattice() const { return lattice_; }

  bool contains(Vec2 p) const { return dot(p, a_) > s_; }
  Vec2 reflect(Vec2 p) const { return p + 2.0 * (s_ - dot(p, a_)) * a_; }

private:
  Polarizer(Vec2 a, double s) : a_(a), s_(s) {}

  Vec2 a_;
  double s_;
  std::optional<LatticeReflection> lattice_;
};

/// Reflection across the boundary line of H.
Vec2 reflect(Vec2 p, const Polarizer& H);

/// [(mask U sigma mask) n H] U [mask n sigma mask], cellwise.
PixelMask polarize_set(const PixelMask& mask, const Polarizer& H);
/// Reflected mask sigma_H(mask).
PixelMask reflect_set(const PixelMask& mask, const Polarizer& H);

/// Two-point rearrangement: max{u(x), u(sigma x)} on H, min on its complement.
/// u must be nonnegative; the result lives on polarize_set(u.mask(), H).
GridFunction polarize_fn(const GridFunction& u, const Polarizer& H);

/// Disc-shaped mask centred at the origin with the same cell count: the N
/// pixels whose centres are nearest the origin, ties broken by (row, col).
PixelMask schwarz_set(const PixelMask& mask);

/// Decreasing rearrangement onto schwarz_set(mask); requires u >= 0.
GridFunction schwarz_fn(const GridFunction& u);

} // namespace logpot
