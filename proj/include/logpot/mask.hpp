#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "logpot/shape.hpp"
#include "logpot/vec2.hpp"

namespace logpot {

/// Integer cell coordinates: column (x direction) and row (y direction).
struct Cell {
  long col = 0;
  long row = 0;
  friend constexpr bool operator==(Cell, Cell) = default;
};

/// Centre of pixel (0, 0) of the standard grid whose cells are the squares
/// [i h, (i+1) h] x [j h, (j+1) h].
inline Vec2 pixel_anchor(double h) { return {0.5 * h, 0.5 * h}; }

/// Discrete open set: occupied cells of a uniform grid. Cell (col, row) has
/// its centre at origin + h * (col, row). Active cells are enumerated in
/// row-major order (row first, then column), which fixes the layout of every
/// GridFunction defined on the mask.
class PixelMask {
public:
  PixelMask(Vec2 origin, double h, int nx, int ny, std::vector<std::uint8_t> occupancy);

  /// Builds the tight mask holding `cells`, given as lattice coordinates
  /// relative to `anchor` (cell centre = anchor + h * (col, row)).
  static PixelMask from_cells(Vec2 anchor, double h, std::span<const Cell> cells);

  Vec2 origin() const { return origin_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t active_count() const { return active_.size(); }
  double area() const { return static_cast<double>(active_.size()) * h_ * h_; }
  const std::vector<std::uint8_t>& occupancy() const { return occ_; }

  bool occupied(long col, long row) const;
  /// Position of the cell in the active enumeration, or -1.
  std::ptrdiff_t active_index(long col, long row) const;

  Cell active_cell(std::size_t k) const {
    const int lin = active_[k];
    return {lin % nx_, lin / nx_};
  }
  Vec2 center(long col, long row) const {
    return {origin_.x + h_ * static_cast<double>(col), origin_.y + h_ * static_cast<double>(row)};
  }
  Vec2 active_center(std::size_t k) const {
    const Cell c = active_cell(k);
    return center(c.col, c.row);
  }
  std::vector<Vec2> active_centers() const;

  /// Integer offset of origin on the lattice anchor + h Z^2, if aligned.
  std::optional<Cell> lattice_offset(Vec2 anchor) const;
  std::optional<Cell> lattice_offset() const { return lattice_offset(pixel_anchor(h_)); }
  /// Active cells in lattice coordinates relative to anchor (throws if unaligned).
  std::vector<Cell> lattice_cells(Vec2 anchor) const;
  std::vector<Cell> lattice_cells() const { return lattice_cells(pixel_anchor(h_)); }

  friend bool operator==(const PixelMask& a, const PixelMask& b) {
    return a.h_ == b.h_ && a.origin_ == b.origin_ && a.nx_ == b.nx_ && a.ny_ == b.ny_ &&
           a.occ_ == b.occ_;
  }

private:
  Vec2 origin_;
  double h_;
  int nx_;
  int ny_;
  std::vector<std::uint8_t> occ_;
  std::vector<int> active_;
  std::vector<int> index_;
};

/// Real values on the active cells of a mask, implicitly zero elsewhere.
class GridFunction {
public:
  GridFunction(std::shared_ptr<const PixelMask> mask, std::vector<double> values);

  static GridFunction constant(std::shared_ptr<const PixelMask> mask, double value);

  const PixelMask& mask() const { return *mask_; }
  const std::shared_ptr<const PixelMask>& mask_ptr() const { return mask_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

  /// sqrt(h^2 * sum v^2), the discrete L2(Omega) norm.
  double l2_norm() const;
  double min_value() const;

private:
  std::shared_ptr<const PixelMask> mask_;
  std::vector<double> values_;
};

/// Cell active iff its centre lies in the open shape. Cells are the pixels of
/// the standard grid (centres pixel_anchor(h) + h Z^2), so masks rasterised at
/// the same h share cell centres.
PixelMask rasterize(const Shape& shape, double h);

/// Largest distance between active cell centres (convex hull + rotating calipers).
double diameter(const PixelMask& mask);

/// Convex hull in counter-clockwise order, collinear points dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Cellwise containment; both masks must share h and lattice.
bool is_subset(const PixelMask& inner, const PixelMask& outer);
/// Same set of lattice cells.
bool same_cells(const PixelMask& a, const PixelMask& b);

/// Discrete L2 distance of the zero extensions of two functions on a shared lattice.
double l2_distance(const GridFunction& a, const GridFunction& b);

/// Cells with at least one of the four neighbours outside the mask.
std::vector<Vec2> exposed_centers(const PixelMask& mask);

} // namespace logpot
