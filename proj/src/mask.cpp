#include "logpot/mask.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "logpot/error.hpp"

namespace logpot {
namespace {

constexpr double kAlignTol = 1e-6;

bool same_h(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

// Lattice cell -> value, for aligning functions on different masks.
std::map<std::pair<long, long>, double> lattice_values(const GridFunction& u) {
  std::map<std::pair<long, long>, double> out;
  const auto cells = u.mask().lattice_cells();
  for (std::size_t k = 0; k < cells.size(); ++k) out[{cells[k].row, cells[k].col}] = u[k];
  return out;
}

} // namespace

PixelMask::PixelMask(Vec2 origin, double h, int nx, int ny, std::vector<std::uint8_t> occupancy)
    : origin_(origin), h_(h), nx_(nx), ny_(ny), occ_(std::move(occupancy)) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("mask: cell spacing must be positive");
  if (!is_finite(origin)) throw InputError("mask: non-finite origin");
  if (nx < 0 || ny < 0 || occ_.size() != static_cast<std::size_t>(nx) * ny)
    throw InputError("mask: occupancy size does not match dimensions");
  index_.assign(occ_.size(), -1);
  for (int lin = 0; lin < static_cast<int>(occ_.size()); ++lin) {
    if (occ_[lin]) {
      occ_[lin] = 1;
      index_[lin] = static_cast<int>(active_.size());
      active_.push_back(lin);
    }
  }
}

PixelMask PixelMask::from_cells(Vec2 anchor, double h, std::span<const Cell> cells) {
  if (cells.empty()) throw InputError("mask: no active cell");
  long cmin = cells[0].col, cmax = cmin, rmin = cells[0].row, rmax = rmin;
  for (const auto& c : cells) {
    cmin = std::min(cmin, c.col);
    cmax = std::max(cmax, c.col);
    rmin = std::min(rmin, c.row);
    rmax = std::max(rmax, c.row);
  }
  const int nx = static_cast<int>(cmax - cmin + 1), ny = static_cast<int>(rmax - rmin + 1);
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(nx) * ny, 0);
  for (const auto& c : cells) occ[(c.row - rmin) * nx + (c.col - cmin)] = 1;
  const Vec2 origin{anchor.x + h * static_cast<double>(cmin), anchor.y + h * static_cast<double>(rmin)};
  return PixelMask(origin, h, nx, ny, std::move(occ));
}

bool PixelMask::occupied(long col, long row) const {
  if (col < 0 || row < 0 || col >= nx_ || row >= ny_) return false;
  return occ_[row * nx_ + col] != 0;
}

std::ptrdiff_t PixelMask::active_index(long col, long row) const {
  if (col < 0 || row < 0 || col >= nx_ || row >= ny_) return -1;
  return index_[row * nx_ + col];
}

std::vector<Vec2> PixelMask::active_centers() const {
  std::vector<Vec2> out;
  out.reserve(active_.size());
  for (std::size_t k = 0; k < active_.size(); ++k) out.push_back(active_center(k));
  return out;
}

std::optional<Cell> PixelMask::lattice_offset(Vec2 anchor) const {
  const double fx = (origin_.x - anchor.x) / h_, fy = (origin_.y - anchor.y) / h_;
  const double rx = std::round(fx), ry = std::round(fy);
  if (std::abs(fx - rx) > kAlignTol || std::abs(fy - ry) > kAlignTol) return std::nullopt;
  return Cell{static_cast<long>(rx), static_cast<long>(ry)};
}

std::vector<Cell> PixelMask::lattice_cells(Vec2 anchor) const {
  const auto off = lattice_offset(anchor);
  if (!off) throw InputError("mask: origin is not on the requested lattice");
  std::vector<Cell> out;
  out.reserve(active_.size());
  for (std::size_t k = 0; k < active_.size(); ++k) {
    const Cell c = active_cell(k);
    out.push_back({c.col + off->col, c.row + off->row});
  }
  return out;
}

GridFunction::GridFunction(std::shared_ptr<const PixelMask> mask, std::vector<double> values)
    : mask_(std::move(mask)), values_(std::move(values)) {
  if (!mask_) throw InputError("grid function: null mask");
  if (values_.size() != mask_->active_count())
    throw InputError("grid function: value count does not match active cells");
  for (double v : values_)
    if (!std::isfinite(v)) throw InputError("grid function: non-finite value");
}

GridFunction GridFunction::constant(std::shared_ptr<const PixelMask> mask, double value) {
  const std::size_t n = mask ? mask->active_count() : 0;
  return GridFunction(std::move(mask), std::vector<double>(n, value));
}

double GridFunction::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s) * mask_->h();
}

double GridFunction::min_value() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

PixelMask rasterize(const Shape& shape, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("rasterize: h must be positive");
  validate(shape);
  const BBox b = bounds(shape);
  const long c0 = static_cast<long>(std::floor(b.lo.x / h)) - 1;
  const long c1 = static_cast<long>(std::ceil(b.hi.x / h)) + 1;
  const long r0 = static_cast<long>(std::floor(b.lo.y / h)) - 1;
  const long r1 = static_cast<long>(std::ceil(b.hi.y / h)) + 1;
  if (static_cast<double>(c1 - c0) * static_cast<double>(r1 - r0) > 4e8)
    throw InputError("rasterize: grid too large for this h");
  std::vector<Cell> cells;
  for (long r = r0; r <= r1; ++r)
    for (long c = c0; c <= c1; ++c)
      if (contains(shape, {h * (static_cast<double>(c) + 0.5), h * (static_cast<double>(r) + 0.5)}))
        cells.push_back({c, r});
  if (cells.empty()) throw InputError("rasterize: resolution too coarse (no active cell)");
  return PixelMask::from_cells(pixel_anchor(h), h, cells);
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double diameter(const PixelMask& mask) {
  if (mask.active_count() == 0) throw InputError("diameter: empty mask");
  // Only the extreme cells of each row can be hull vertices.
  std::vector<Vec2> extremes;
  for (int r = 0; r < mask.ny(); ++r) {
    int first = -1, last = -1;
    for (int c = 0; c < mask.nx(); ++c)
      if (mask.occupied(c, r)) {
        if (first < 0) first = c;
        last = c;
      }
    if (first >= 0) {
      extremes.push_back(mask.center(first, r));
      if (last != first) extremes.push_back(mask.center(last, r));
    }
  }
  const auto hull = convex_hull(std::move(extremes));
  const std::size_t n = hull.size();
  if (n == 1) return 0.0;
  if (n == 2) return distance(hull[0], hull[1]);
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = hull[i], b = hull[(i + 1) % n];
    while (std::abs(cross(b - a, hull[(j + 1) % n] - a)) > std::abs(cross(b - a, hull[j] - a)))
      j = (j + 1) % n;
    best = std::max({best, distance(a, hull[j]), distance(b, hull[j])});
  }
  return best;
}

bool is_subset(const PixelMask& inner, const PixelMask& outer) {
  if (!same_h(inner.h(), outer.h())) throw InputError("is_subset: masks use different h");
  const auto off_in = inner.lattice_offset(outer.origin());
  if (!off_in) throw InputError("is_subset: masks live on different lattices");
  for (std::size_t k = 0; k < inner.active_count(); ++k) {
    const Cell c = inner.active_cell(k);
    if (!outer.occupied(c.col + off_in->col, c.row + off_in->row)) return false;
  }
  return true;
}

bool same_cells(const PixelMask& a, const PixelMask& b) {
  return a.active_count() == b.active_count() && is_subset(a, b);
}

double l2_distance(const GridFunction& a, const GridFunction& b) {
  if (!same_h(a.mask().h(), b.mask().h())) throw InputError("l2_distance: different h");
  auto va = lattice_values(a);
  const auto vb = lattice_values(b);
  for (const auto& [key, v] : vb) va[key] -= v;
  double s = 0.0;
  for (const auto& [key, v] : va) s += v * v;
  return std::sqrt(s) * a.mask().h();
}

std::vector<Vec2> exposed_centers(const PixelMask& mask) {
  std::vector<Vec2> out;
  for (std::size_t k = 0; k < mask.active_count(); ++k) {
    const Cell c = mask.active_cell(k);
    if (!mask.occupied(c.col - 1, c.row) || !mask.occupied(c.col + 1, c.row) ||
        !mask.occupied(c.col, c.row - 1) || !mask.occupied(c.col, c.row + 1))
      out.push_back(mask.center(c.col, c.row));
  }
  return out;
}

} // namespace logpot
