#include "doctest.h"

#include <cmath>
#include <numbers>

#include "logpot/disc_spectrum.hpp"
#include "logpot/error.hpp"
#include "logpot/verify.hpp"

using namespace logpot;

namespace {

RunOptions quick() {
  RunOptions o;
  o.refine_probe = false;
  return o;
}

std::shared_ptr<const PixelMask> share(PixelMask m) { return std::make_shared<const PixelMask>(std::move(m)); }

Shape blob() {
  std::vector<Vec2> v;
  for (int k = 0; k < 720; ++k) {
    const double th = 2 * std::numbers::pi * k / 720, r = 2 + 0.45 * std::cos(3 * th);
    v.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return Polygon{v};
}

} // namespace

TEST_CASE("monotone verdict rule") {
  CHECK(monotone_verdict({}, 1.0, 1) == Verdict::Pass);
  CHECK(monotone_verdict({0.3}, 1.0, 1) == Verdict::Pass);
  CHECK(monotone_verdict({1.0, 2.0, 3.0}, 0.3, 1) == Verdict::Pass);
  CHECK(monotone_verdict({1.0, 2.0, 3.0}, 0.34, 1) == Verdict::Inconclusive);
  CHECK(monotone_verdict({3.0, 2.0, 1.0}, 0.1, -1) == Verdict::Pass);
  CHECK(monotone_verdict({1.0, 2.0, 1.0}, 0.1, 1) == Verdict::Fail);
  CHECK(monotone_verdict({1.0, 1.0}, 0.0, 1) == Verdict::Inconclusive);
  CHECK_THROWS_AS(monotone_verdict({1.0}, 0.1, 0), InputError);
}

TEST_CASE("orbit-pair margin equals the energy difference") {
  for (const auto& k : {KernelSpec::log(), KernelSpec::riesz(1.0), KernelSpec::riesz(0.5)})
    for (std::uint64_t s = 0; s < 25; ++s) {
      const auto c = random_riesz_case(s);
      const double m = check_riesz_polarization(c.u, c.H, k);
      const double direct = discrete_energy(polarize_fn(c.u, c.H), k) - discrete_energy(c.u, k);
      const double scale = std::abs(discrete_energy(c.u, k)) + 1e-300;
      INFO(k.name() << " seed " << s);
      CHECK(std::abs(m - direct) <= 1e-10 * scale);
      CHECK(m >= -1e-12);
    }
}

TEST_CASE("Riesz polarization inequality on random cases") {
  for (const auto& k : {KernelSpec::log(), KernelSpec::riesz(1.0)}) {
    const auto rep = riesz_suite(k, 200, 99);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.samples.size() == 200);
    CHECK(rep.summary_value("min_margin") >= -1e-12);
  }
}

TEST_CASE("Riesz margin edge cases") {
  const double h = 0.1;
  auto mask = share(rasterize(Disc{{0, 0}, 0.5}, h));
  const auto H = Polarizer::on_grid({1, 0}, 0.0, h);
  CHECK(check_riesz_polarization(GridFunction::constant(mask, 1.0), H, KernelSpec::log()) == doctest::Approx(0.0).scale(1e-12));
  std::vector<double> v(mask->active_count(), 1.0);
  v[0] = -0.5;
  CHECK_THROWS_AS(check_riesz_polarization(GridFunction(mask, v), H, KernelSpec::log()), InputError);
  CHECK_THROWS_AS(check_riesz_polarization(GridFunction::constant(mask, 1.0), Polarizer::make({1, 0}, 0.013), KernelSpec::log()), InputError);
}

TEST_CASE("reverse Faber-Krahn under polarization") {
  const double h = 0.025;
  const Shape half = Rect{{-0.4, 0.0}, {0.4, 0.4}};
  const auto strict = reverse_fk_polarization(make_difference(Disc{{0, 0}, 0.45}, half), Polarizer::on_grid({0, 1}, -0.1, h), h, false, quick());
  CHECK(strict.gap > 3 * strict.tolerance);
  CHECK(strict.hypothesis_verified);
  const auto sym = reverse_fk_polarization(Disc{{0, 0}, 0.45}, Polarizer::on_grid({1, 0}, 0.0, h), h, false, quick());
  CHECK(std::abs(sym.gap) <= sym.tolerance);
  const auto ell = reverse_fk_polarization(Ellipse{{0.05, 0}, 0.4, 0.2, 0.0}, Polarizer::on_grid({std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}, 0.0, h), h, false, quick());
  CHECK(ell.gap >= -1e-6);
  CHECK_THROWS_AS(reverse_fk_polarization(Disc{{0, 0}, 0.8}, Polarizer::on_grid({1, 0}, 0.0, h), h, false, quick()), InputError);
  CHECK_NOTHROW(reverse_fk_polarization(Disc{{0, 0}, 0.8}, Polarizer::on_grid({1, 0}, 0.0, 0.1), 0.1, true, quick()));
}

TEST_CASE("reverse Faber-Krahn under Schwarz symmetrisation") {
  const double s = std::sqrt(std::numbers::pi) / 8;
  const auto sq = reverse_fk_schwarz(Rect{{-s, -s}, {s, s}}, 0.025, false, quick());
  CHECK(sq.gap > 3 * sq.tolerance);
  const auto disc = reverse_fk_schwarz(Disc{{0.3, 0.1}, 0.3}, 0.025, false, quick());
  CHECK(std::abs(disc.gap) <= 3 * disc.tolerance);
  const auto ann = reverse_fk_schwarz(EccentricAnnulus{0.45, 0.1, 0.2}, 0.025, false, quick());
  CHECK(ann.gap > 3 * ann.tolerance);
}

TEST_CASE("annulus sweep") {
  const auto rep = annulus_sweep(0.45, 0.1, {0.0, 0.15, 0.3}, 0.02, quick());
  CHECK(rep.verdict == Verdict::Pass);
  const auto tau = rep.column("tau_top");
  CHECK(tau[0] < tau[1]);
  CHECK(tau[1] < tau[2]);
  for (const auto& n : rep.notes) CHECK(n.find("hypothesis") == std::string::npos);
  CHECK(annulus_sweep(0.45, 0.1, {0.2}, 0.03).verdict == Verdict::Pass);
  const auto flat = annulus_sweep(0.45, 0.1, {0.1, 0.1}, 0.03, quick());
  CHECK(flat.samples[0][1] == flat.samples[1][1]);
  CHECK(flat.verdict == Verdict::Inconclusive);
  CHECK_FALSE(annulus_sweep(0.6, 0.1, {0.0}, 0.05, quick()).notes.empty());
}

TEST_CASE("obstacle sweeps") {
  const auto tr = obstacle_sweep(ObstacleKind::Translate, {0.0, 0.05, 0.1, 0.15}, 0.025);
  CHECK(tr.verdict == Verdict::Pass);
  const auto rot = obstacle_sweep(ObstacleKind::Rotate, {0.0, std::numbers::pi / 6, std::numbers::pi / 3}, 0.03, quick());
  const auto tau = rot.column("tau_top");
  CHECK(tau[0] < tau[2]);
  CHECK(obstacle_sweep(ObstacleKind::Translate, {}, 0.025).verdict == Verdict::Pass);
  CHECK_THROWS_AS(obstacle_sweep(ObstacleKind::Translate, {0.3}, 0.025), InputError);
  CHECK_THROWS_AS(obstacle_sweep(ObstacleKind::Rotate, {std::numbers::pi}, 0.03), InputError);
}

TEST_CASE("two balls and dumbbell") {
  const auto two = two_ball_sweep({3, 6, 12}, 0.2);
  CHECK(two.verdict == Verdict::Pass);
  CHECK(two.summary_value("ratio_last_first") >= 1.5);
  CHECK_THROWS_AS(two_ball_sweep({1.5, 3}, 0.2), InputError);

  for (double d : {6.0, 12.0, 24.0}) {
    const auto m = rasterize(dumbbell(3 * std::numbers::pi, d, 0.05), 0.05);
    CHECK(m.area() == doctest::Approx(3 * std::numbers::pi).epsilon(0.02));
  }
  const auto db = dumbbell_sweep(3 * std::numbers::pi, {6, 12}, 0.05, quick());
  CHECK(db.verdict == Verdict::Pass);
  CHECK(db.summary_value("max_area_deviation") <= 0.02);
  CHECK_THROWS_AS(dumbbell(3 * std::numbers::pi, 1.5, 0.05), InputError);
}

TEST_CASE("inscribed and enclosing circles") {
  const auto sq = rasterize(Rect{{0, 0}, {1, 1}}, 0.1);
  CHECK(inscribed_radius(sq) == doctest::Approx(0.45).epsilon(1e-12));
  const auto c = enclosing_circle(sq);
  CHECK(c.radius == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(c.center.x == doctest::Approx(0.5));
  const auto tri = min_enclosing_circle({{0, 0}, {2, 0}, {1, 0.2}, {1, -0.1}});
  CHECK(tri.radius == doctest::Approx(1.0));
  const auto eq = min_enclosing_circle({{1, 0}, {-0.5, std::sqrt(3) / 2}, {-0.5, -std::sqrt(3) / 2}, {0, 0}});
  CHECK(eq.radius == doctest::Approx(1.0));
}

TEST_CASE("disc sandwich") {
  const auto rep = sandwich_check(blob(), 0.1);
  CHECK(rep.verdict == Verdict::Pass);
  const auto row = rep.samples.front();
  CHECK(row[0] > 1.3);
  CHECK(row[1] < 2.7);
  const auto disc = sandwich_check(Disc{{0, 0}, 2.0}, 0.1);
  CHECK(disc.verdict == Verdict::Pass);
  CHECK(disc.samples[0][3] == doctest::Approx(neg_eig(2.0).tau).epsilon(0.03));
  CHECK_THROWS_AS(sandwich_check(Disc{{0, 0}, 0.9}, 0.1), InputError);
}

TEST_CASE("domain monotonicity") {
  const auto pos = domain_monotonicity_check(Disc{{0, 0}, 0.3}, Disc{{0, 0}, 0.45}, 0.03, quick());
  CHECK(pos.verdict == Verdict::Pass);
  CHECK(pos.summary_value("gap_top") > 0);
  const auto neg = domain_monotonicity_check(Disc{{0, 0}, 2.0}, Disc{{0, 0}, 3.0}, 0.2, quick());
  CHECK(neg.verdict == Verdict::Pass);
  CHECK(neg.summary_value("gap_bottom") > 0);
  const auto same = domain_monotonicity_check(Disc{{0, 0}, 0.4}, Disc{{0, 0}, 0.4}, 0.04, quick());
  CHECK(same.verdict == Verdict::Pass);
  CHECK(same.summary_value("gap_top") == doctest::Approx(0.0).scale(1e-12));
  CHECK_THROWS_AS(domain_monotonicity_check(Disc{{0, 0}, 0.45}, Disc{{0.2, 0}, 0.3}, 0.03), InputError);
}

TEST_CASE("polarization flow") {
  const double h = 0.05;
  auto disc = share(schwarz_set(rasterize(Disc{{0, 0}, 0.4}, h)));
  const auto still = polarization_flow(GridFunction::constant(disc, 1.0), 50, 1);
  CHECK(still.summary_value("final_distance") == 0.0);
  CHECK(still.summary_value("initial_distance") == 0.0);

  auto ell = share(rasterize(Ellipse{{0, 0}, 0.5, 0.25, 0.0}, h));
  const auto flow = polarization_flow(GridFunction::constant(ell, 1.0), 500, 0);
  CHECK(flow.verdict == Verdict::Pass);
  const auto energy = flow.column("energy");
  for (std::size_t i = 1; i < energy.size(); ++i) CHECK(energy[i] >= energy[i - 1]);
  CHECK(flow.summary_value("final_distance") < flow.summary_value("initial_distance"));
  const auto again = polarization_flow(GridFunction::constant(ell, 1.0), 500, 0);
  CHECK(again.samples == flow.samples);
}

TEST_CASE("conjecture scans never pass") {
  ScanConfig cfg;
  cfg.cases = 10;
  const auto t = conjecture_scan(ConjectureKind::TdiamPolarization, cfg, 3);
  CHECK(t.verdict != Verdict::Pass);
  CHECK(t.samples.size() == 10);
  cfg.cases = 4;
  const auto n = conjecture_scan(ConjectureKind::NegativeFaberKrahn, cfg, 3);
  CHECK(n.verdict != Verdict::Pass);
  CHECK(conjecture_scan(ConjectureKind::NegativeFaberKrahn, cfg, 3).samples.size() == 4);
}
