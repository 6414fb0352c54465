#include "logpot/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "logpot/error.hpp"

namespace logpot {
namespace {

constexpr double kIntTol = 1e-7;

int sgn(double v) { return (v > 0.0) - (v < 0.0); }
int sgn(long v) { return (v > 0) - (v < 0); }

long as_integer(double v, const char* what) {
  const double r = std::round(v);
  if (std::abs(v - r) > kIntTol)
    throw InputError(std::string("polarizer is not grid compatible: ") + what);
  return static_cast<long>(r);
}

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    return std::hash<long>()(c.col) * 1000003u ^ std::hash<long>()(c.row);
  }
};

using CellIndex = std::unordered_map<Cell, std::size_t, CellHash>;

CellIndex index_cells(const std::vector<Cell>& cells) {
  CellIndex idx;
  idx.reserve(cells.size() * 2);
  for (std::size_t k = 0; k < cells.size(); ++k) idx.emplace(cells[k], k);
  return idx;
}

const LatticeReflection& require_lattice(const PixelMask& mask, const Polarizer& H) {
  if (!H.grid_compatible())
    throw InputError("polarization needs a grid-compatible polarizer");
  const auto& L = *H.lattice();
  if (std::abs(L.h - mask.h()) > 1e-12 * mask.h())
    throw InputError("polarizer lattice spacing differs from the mask's");
  if (!mask.lattice_offset(L.anchor))
    throw InputError("mask is not aligned with the polarizer lattice");
  return L;
}

} // namespace

int LatticeReflection::side(Cell c, Vec2 normal) const {
  const Cell img = apply(c);
  const long dc = c.col - img.col, dr = c.row - img.row;
  return sgn(dc * sgn(normal.x) + dr * sgn(normal.y));
}

Polarizer Polarizer::make(Vec2 normal, double offset) {
  const double n = norm(normal);
  if (!std::isfinite(n) || n == 0.0 || !std::isfinite(offset))
    throw InputError("polarizer: normal must be nonzero and finite");
  if (std::abs(n - 1.0) > 1e-9) throw InputError("polarizer: normal must be a unit vector");
  return Polarizer(normal * (1.0 / n), offset);
}

Polarizer Polarizer::on_grid(Vec2 normal, double offset, double h, std::optional<Vec2> anchor_opt) {
  if (!(h > 0.0)) throw InputError("polarizer: lattice spacing must be positive");
  const Vec2 anchor = anchor_opt.value_or(pixel_anchor(h));
  Polarizer P = make(normal, offset);
  const int px = std::abs(P.a_.x) < 1e-9 ? 0 : sgn(P.a_.x);
  const int qy = std::abs(P.a_.y) < 1e-9 ? 0 : sgn(P.a_.y);
  const double r2 = std::numbers::sqrt2 / 2.0;
  LatticeReflection L;
  L.anchor = anchor;
  L.h = h;
  const double s = offset;
  if (qy == 0) {
    P.a_ = {static_cast<double>(px), 0.0};
    L.m00 = -1; L.m01 = 0; L.m10 = 0; L.m11 = 1;
    L.c0 = as_integer((2.0 * s * px - 2.0 * anchor.x) / h, "offset must be a multiple of h/2");
    L.c1 = 0;
  } else if (px == 0) {
    P.a_ = {0.0, static_cast<double>(qy)};
    L.m00 = 1; L.m01 = 0; L.m10 = 0; L.m11 = -1;
    L.c0 = 0;
    L.c1 = as_integer((2.0 * s * qy - 2.0 * anchor.y) / h, "offset must be a multiple of h/2");
  } else {
    if (std::abs(std::abs(P.a_.x) - r2) > 1e-9 || std::abs(std::abs(P.a_.y) - r2) > 1e-9)
      throw InputError("polarizer is not grid compatible: normal must be axis-aligned or diagonal");
    P.a_ = {px * r2, qy * r2};
    const int pq = px * qy;
    // sigma(x, y) = (p sqrt2 s - pq y, q sqrt2 s - pq x)
    L.m00 = 0; L.m01 = -pq; L.m10 = -pq; L.m11 = 0;
    const double t = std::numbers::sqrt2 * s;
    L.c0 = as_integer((px * t - pq * anchor.y - anchor.x) / h, "line must pass through cell centres");
    L.c1 = as_integer((qy * t - pq * anchor.x - anchor.y) / h, "line must pass through cell centres");
  }
  P.lattice_ = L;
  return P;
}

Vec2 reflect(Vec2 p, const Polarizer& H) { return H.reflect(p); }

PixelMask reflect_set(const PixelMask& mask, const Polarizer& H) {
  const auto& L = require_lattice(mask, H);
  auto cells = mask.lattice_cells(L.anchor);
  for (auto& c : cells) c = L.apply(c);
  return PixelMask::from_cells(L.anchor, mask.h(), cells);
}

PixelMask polarize_set(const PixelMask& mask, const Polarizer& H) {
  const auto& L = require_lattice(mask, H);
  const auto cells = mask.lattice_cells(L.anchor);
  const auto idx = index_cells(cells);
  auto in = [&](Cell c) { return idx.count(c) != 0; };

  std::vector<Cell> out;
  out.reserve(cells.size());
  auto consider = [&](Cell x) {
    const int side = L.side(x, H.normal());
    const Cell y = L.apply(x);
    const bool keep = side > 0 ? (in(x) || in(y)) : side < 0 ? (in(x) && in(y)) : in(x);
    if (keep) out.push_back(x);
  };
  for (const auto& c : cells) consider(c);
  for (const auto& c : cells) {
    const Cell y = L.apply(c);
    if (!in(y)) consider(y);
  }
  return PixelMask::from_cells(L.anchor, mask.h(), out);
}

GridFunction polarize_fn(const GridFunction& u, const Polarizer& H) {
  if (u.min_value() < 0.0) throw InputError("polarize_fn: function must be nonnegative");
  const auto& L = require_lattice(u.mask(), H);
  const auto cells = u.mask().lattice_cells(L.anchor);
  const auto idx = index_cells(cells);
  auto value = [&](Cell c) {
    const auto it = idx.find(c);
    return it == idx.end() ? 0.0 : u[it->second];
  };

  auto target = std::make_shared<const PixelMask>(polarize_set(u.mask(), H));
  const auto tcells = target->lattice_cells(L.anchor);
  std::vector<double> vals(tcells.size());
  for (std::size_t k = 0; k < tcells.size(); ++k) {
    const Cell x = tcells[k];
    const double a = value(x), b = value(L.apply(x));
    const int side = L.side(x, H.normal());
    vals[k] = side > 0 ? std::max(a, b) : side < 0 ? std::min(a, b) : a;
  }
  return GridFunction(std::move(target), std::move(vals));
}

namespace {

// The n pixels whose centres are closest to the origin, in (distance, row, col) order.
std::vector<Cell> nearest_cells(std::size_t n) {
  long radius = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(n) / std::numbers::pi))) + 2;
  for (;;) {
    std::vector<Cell> pts;
    const long r2max = 4 * radius * radius;
    for (long r = -radius - 1; r <= radius; ++r)
      for (long c = -radius - 1; c <= radius; ++c)
        if ((2 * r + 1) * (2 * r + 1) + (2 * c + 1) * (2 * c + 1) <= r2max) pts.push_back({c, r});
    if (pts.size() >= n) {
      std::sort(pts.begin(), pts.end(), [](Cell a, Cell b) {
        const long da = (2 * a.col + 1) * (2 * a.col + 1) + (2 * a.row + 1) * (2 * a.row + 1);
        const long db = (2 * b.col + 1) * (2 * b.col + 1) + (2 * b.row + 1) * (2 * b.row + 1);
        if (da != db) return da < db;
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
      });
      pts.resize(n);
      return pts;
    }
    radius += 2;
  }
}

} // namespace

PixelMask schwarz_set(const PixelMask& mask) {
  if (mask.active_count() == 0) throw InputError("schwarz_set: empty mask");
  const auto cells = nearest_cells(mask.active_count());
  return PixelMask::from_cells(pixel_anchor(mask.h()), mask.h(), cells);
}

GridFunction schwarz_fn(const GridFunction& u) {
  if (u.min_value() < 0.0) throw InputError("schwarz_fn: function must be nonnegative");
  const std::size_t n = u.size();
  const auto ranked = nearest_cells(n);
  auto target = std::make_shared<const PixelMask>(PixelMask::from_cells(pixel_anchor(u.mask().h()), u.mask().h(), ranked));
  std::vector<double> sorted(u.values().begin(), u.values().end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto off = *target->lattice_offset();
  std::vector<double> vals(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto pos = target->active_index(ranked[k].col - off.col, ranked[k].row - off.row);
    vals[static_cast<std::size_t>(pos)] = sorted[k];
  }
  return GridFunction(std::move(target), std::move(vals));
}

} // namespace logpot
