#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "logpot/error.hpp"
#include "logpot/mask.hpp"
#include "logpot/rearrange.hpp"
#include "logpot/shape.hpp"

using namespace logpot;

namespace {

double brute_diameter(const PixelMask& m) {
  const auto pts = m.active_centers();
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, distance(pts[i], pts[j]));
  return best;
}

std::vector<double> sorted_values(const GridFunction& u) {
  std::vector<double> v(u.values().begin(), u.values().end());
  std::sort(v.begin(), v.end());
  return v;
}

Shape random_blob(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-0.3, 0.3), R(0.08, 0.25);
  Union u;
  const int parts = 1 + static_cast<int>(rng() % 3);
  for (int k = 0; k < parts; ++k) {
    if (rng() % 2) u.parts.push_back(Disc{{U(rng), U(rng)}, R(rng)});
    else u.parts.push_back(Ellipse{{U(rng), U(rng)}, R(rng), 0.5 * R(rng), U(rng) * 5});
  }
  return u;
}

Polarizer random_polarizer(std::mt19937_64& rng, double h) {
  const double r2 = std::numbers::sqrt2 / 2;
  const Vec2 normals[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {r2, r2}, {-r2, r2}, {r2, -r2}, {-r2, -r2}};
  const Vec2 a = normals[rng() % 8];
  const long k = static_cast<long>(rng() % 21) - 10;
  // axis lines at multiples of h/2; diagonal lines through centres (s = k h / sqrt2)
  const double s = (a.x == 0 || a.y == 0) ? k * h / 2 : k * h * r2;
  return Polarizer::on_grid(a, s, h);
}

} // namespace

TEST_CASE("rasterize disc area and hole placement") {
  const auto m = rasterize(Disc{{0, 0}, 1.0}, 0.05);
  CHECK(std::abs(m.area() - std::numbers::pi) < 0.02 * std::numbers::pi);

  const auto ecc = rasterize(EccentricAnnulus{0.45, 0.1, 0.2}, 0.01);
  // centroid of the removed cells sits at the hole centre
  const auto full = rasterize(Disc{{0, 0}, 0.45}, 0.01);
  Vec2 sum{};
  int count = 0;
  const auto cells = full.lattice_cells();
  const auto have = ecc.lattice_cells();
  for (const auto& c : cells)
    if (std::find(have.begin(), have.end(), c) == have.end()) {
      sum += Vec2{(c.col + 0.5) * 0.01, (c.row + 0.5) * 0.01};
      ++count;
    }
  REQUIRE(count > 0);
  CHECK(std::abs(sum.x / count - 0.2) < 1e-9);
  CHECK(std::abs(sum.y / count) < 1e-9);
  for (std::size_t k = 0; k < ecc.active_count(); ++k)
    CHECK(contains(EccentricAnnulus{0.45, 0.1, 0.2}, ecc.active_center(k)));

  CHECK_THROWS_AS(rasterize(Rect{{0, 0}, {0, 0}}, 0.1), InputError);
  CHECK_THROWS_WITH_AS(rasterize(Disc{{0.05, 0.05}, 0.01}, 1.0), doctest::Contains("too coarse"), InputError);
  CHECK_THROWS_AS(validate(EccentricAnnulus{0.45, 0.2, 0.3}), InputError);
}

TEST_CASE("diameter") {
  const auto disc = rasterize(Disc{{0, 0}, 1.0}, 0.02);
  CHECK(std::abs(diameter(disc) - 2.0) <= 0.04);
  const Cell one[] = {{3, 4}};
  CHECK(diameter(PixelMask::from_cells({0, 0}, 0.1, one)) == 0.0);
  const auto two = rasterize(Union{{Disc{{0, 0}, 1.0}, Disc{{3.5, 0}, 1.0}}}, 0.05);
  CHECK(std::abs(diameter(two) - 5.5) <= 0.1);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = rasterize(random_blob(rng), 0.03);
    CHECK(diameter(m) == doctest::Approx(brute_diameter(m)).epsilon(1e-12));
  }
}

TEST_CASE("reflection") {
  const auto H = Polarizer::make({1, 0}, 1.0);
  CHECK(reflect({2, 0}, H) == Vec2{0, 0});
  CHECK(reflect({1, 5}, H) == Vec2{1, 5});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-5, 5);
  const auto D = Polarizer::make({std::cos(0.7), std::sin(0.7)}, 0.3);
  for (int k = 0; k < 100; ++k) {
    const Vec2 p{U(rng), U(rng)};
    CHECK(distance(reflect(reflect(p, D), D), p) < 1e-12);
  }
  CHECK_THROWS_AS(Polarizer::make({0, 0}, 0.0), InputError);
  CHECK_THROWS_AS(Polarizer::on_grid({1, 0}, 0.013, 0.1), InputError);
  CHECK_THROWS_AS(Polarizer::on_grid({0.6, 0.8}, 0.0, 0.1), InputError);
}

TEST_CASE("lattice reflection agrees with the geometric one") {
  std::mt19937_64 rng(11);
  const double h = 0.05;
  for (int k = 0; k < 50; ++k) {
    const auto H = random_polarizer(rng, h);
    const auto& L = *H.lattice();
    for (long c = -5; c <= 5; ++c)
      for (long r = -5; r <= 5; ++r) {
        const Vec2 p{(c + 0.5) * h, (r + 0.5) * h};
        const Cell img = L.apply({c, r});
        CHECK(distance(H.reflect(p), Vec2{(img.col + 0.5) * h, (img.row + 0.5) * h}) < 1e-12);
        const double sd = dot(p, H.normal()) - H.offset();
        const int side = L.side({c, r}, H.normal());
        if (std::abs(sd) < 1e-12) CHECK(side == 0);
        else CHECK(side == (sd > 0 ? 1 : -1));
      }
  }
}

TEST_CASE("polarize_set examples") {
  const double h = 0.05;
  const auto ball = rasterize(Disc{{1, 0}, 0.5}, h);
  const auto H = Polarizer::on_grid({-1, 0}, 0.0, h);
  const auto P = polarize_set(ball, H);
  CHECK(same_cells(P, rasterize(Disc{{-1, 0}, 0.5}, h)));
  CHECK(same_cells(P, reflect_set(ball, H)));

  const auto sym = rasterize(Ellipse{{0, 0.3}, 0.4, 0.2, 0.0}, h);
  CHECK(same_cells(polarize_set(sym, Polarizer::on_grid({1, 0}, 0.0, h)), sym));

  const auto ell = rasterize(Ellipse{{0.1, -0.05}, 0.4, 0.2, 0.3}, h);
  const double r2 = std::numbers::sqrt2 / 2;
  const auto Pd = polarize_set(ell, Polarizer::on_grid({r2, r2}, 0.0, h));
  CHECK(Pd.active_count() == ell.active_count());

  const auto bad = Polarizer::make({1, 0}, 0.01);
  CHECK_THROWS_AS(polarize_set(ell, bad), InputError);
}

TEST_CASE("polarization properties on random masks") {
  std::mt19937_64 rng(2024);
  const double h = 0.04;
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = rasterize(random_blob(rng), h);
    const auto H = random_polarizer(rng, h);
    const auto P = polarize_set(m, H);
    CHECK(P.active_count() == m.active_count());
    CHECK(same_cells(polarize_set(P, H), P));
    CHECK(diameter(P) <= diameter(m) + 1e-12);

    // reflection distance law for cells in H
    const auto& L = *H.lattice();
    const auto cells = m.lattice_cells();
    for (std::size_t i = 0; i < cells.size(); i += 7)
      for (std::size_t j = 0; j < cells.size(); j += 11) {
        const Cell x = cells[i], y = cells[j];
        if (L.side(x, H.normal()) <= 0 || L.side(y, H.normal()) <= 0 || x == y) continue;
        const Cell sy = L.apply(y);
        const double dxy = std::hypot(double(x.col - y.col), double(x.row - y.row));
        const double dxsy = std::hypot(double(x.col - sy.col), double(x.row - sy.row));
        CHECK(dxy < dxsy);
      }

    std::uniform_real_distribution<double> U(0, 1);
    auto mp = std::make_shared<const PixelMask>(m);
    std::vector<double> vals(m.active_count());
    for (auto& v : vals) v = U(rng);
    const GridFunction u(mp, vals);
    const auto Pu = polarize_fn(u, H);
    CHECK(sorted_values(Pu) == sorted_values(u));
    CHECK(Pu.l2_norm() == doctest::Approx(u.l2_norm()).epsilon(1e-14));
    CHECK(same_cells(Pu.mask(), P));
  }
}

TEST_CASE("polarize_fn examples") {
  const double h = 0.05;
  auto m = std::make_shared<const PixelMask>(rasterize(Ellipse{{0.2, 0.1}, 0.4, 0.25, 0.5}, h));
  const auto H = Polarizer::on_grid({-1, 0}, 0.05, h);
  const auto chi = GridFunction::constant(m, 1.0);
  const auto Pchi = polarize_fn(chi, H);
  CHECK(same_cells(Pchi.mask(), polarize_set(*m, H)));
  CHECK(Pchi.min_value() == 1.0);

  // symmetric under reflection in x = 0 (a grid line)
  auto sm = std::make_shared<const PixelMask>(rasterize(Disc{{0, 0}, 0.4}, h));
  std::vector<double> vals;
  for (const auto& p : sm->active_centers()) vals.push_back(1.0 + p.x * p.x + 0.3 * p.y);
  const GridFunction su(sm, vals);
  const auto Psu = polarize_fn(su, Polarizer::on_grid({1, 0}, 0.0, h));
  CHECK(l2_distance(Psu, su) < 1e-14);

  std::vector<double> neg(sm->active_count(), 1.0);
  neg[0] = -0.1;
  CHECK_THROWS_AS(polarize_fn(GridFunction(sm, neg), H), InputError);
}

TEST_CASE("Schwarz symmetrization") {
  const double h = 0.05;
  const auto disc = rasterize(Disc{{0.7, -0.3}, 0.5}, h);
  const auto S = schwarz_set(disc);
  CHECK(S.active_count() == disc.active_count());
  for (std::size_t k = 0; k < S.active_count(); ++k) CHECK(norm(S.active_center(k)) < 0.5 + h);

  const auto ann = rasterize(Annulus{{0, 0}, 1.0, 0.5}, 0.02);
  const auto Sa = schwarz_set(ann);
  CHECK(Sa.active_count() == ann.active_count());
  CHECK(std::abs(diameter(Sa) / 2 - std::sqrt(0.75)) < 0.03);

  const Cell one[] = {{5, 9}};
  const auto single = schwarz_set(PixelMask::from_cells({0, 0}, h, one));
  REQUIRE(single.active_count() == 1);
  CHECK(norm(single.active_center(0)) == doctest::Approx(h / std::sqrt(2.0)));

  auto m = std::make_shared<const PixelMask>(rasterize(Ellipse{{0.3, 0.2}, 0.5, 0.2, 0.4}, h));
  const auto c = schwarz_fn(GridFunction::constant(m, 2.5));
  CHECK(c.min_value() == 2.5);
  CHECK(same_cells(c.mask(), schwarz_set(*m)));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 3);
  std::vector<double> vals(m->active_count());
  for (auto& v : vals) v = U(rng);
  const GridFunction u(m, vals);
  const auto su = schwarz_fn(u);
  CHECK(sorted_values(su) == sorted_values(u));
  // radially nonincreasing
  for (std::size_t i = 0; i < su.size(); ++i)
    for (std::size_t j = 0; j < su.size(); j += 5)
      if (norm(su.mask().active_center(i)) < norm(su.mask().active_center(j)) - 1e-12)
        CHECK(su[i] >= su[j]);

  // radial decreasing function on a centred disc is unchanged
  auto dm = std::make_shared<const PixelMask>(rasterize(Disc{{0, 0}, 0.5}, h));
  std::vector<double> rad;
  for (const auto& p : dm->active_centers()) rad.push_back(std::exp(-norm2(p)));
  const GridFunction ru(dm, rad);
  CHECK(l2_distance(schwarz_fn(ru), ru) < 1e-14);

  std::vector<double> neg(dm->active_count(), 1.0);
  neg[3] = -1;
  CHECK_THROWS_AS(schwarz_fn(GridFunction(dm, neg)), InputError);
}

TEST_CASE("shape helpers") {
  CHECK(nominal_area(Annulus{{0, 0}, 1.0, 0.5}).value() == doctest::Approx(0.75 * std::numbers::pi));
  const auto nodes = outer_boundary(Ellipse{{0, 0}, 2.0, 0.25, 0.0}, 64);
  REQUIRE(nodes);
  CHECK(nodes->points.size() == 64);
  double len = 0;
  for (double l : nodes->lengths) len += l;
  CHECK(len == doctest::Approx(8.186239150048875).epsilon(1e-3));
  const auto proj = project_closed(Disc{{0, 0}, 1.0}, {3, 0});
  REQUIRE(proj);
  CHECK(distance(*proj, {1, 0}) < 1e-12);
  const auto moved = translated(Disc{{0, 0}, 1.0}, {2, 0});
  CHECK(contains(moved, {2.5, 0}));
  CHECK(!contains(rotated(Rect{{0, 0}, {1, 0.2}}, std::numbers::pi / 2), {0.5, 0.1}));
  CHECK(contains(scaled(Disc{{1, 0}, 0.5}, 2.0), {2.9, 0}));
}
