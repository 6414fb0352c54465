#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "logpot/error.hpp"
#include "logpot/solver.hpp"
#include "logpot/specfun.hpp"

using namespace logpot;

namespace {

std::shared_ptr<const PixelMask> mask_of(const Shape& s, double h) {
  return std::make_shared<const PixelMask>(rasterize(s, h));
}

EigOptions with(EigenMethod m) {
  EigOptions o;
  o.method = m;
  return o;
}

} // namespace

TEST_CASE("kernel specs") {
  CHECK(parse_kernel("log").kind == KernelSpec::Kind::Log);
  const auto r = parse_kernel("riesz:1");
  CHECK(r.kind == KernelSpec::Kind::Riesz);
  CHECK(r.alpha == 1.0);
  CHECK(r.prefactor == 1.0);
  CHECK_THROWS_AS(parse_kernel("riesz:2"), InputError);
  CHECK_THROWS_AS(parse_kernel("riesz:x"), InputError);
  CHECK_THROWS_AS(parse_kernel("gauss"), InputError);
  CHECK_THROWS_AS(KernelSpec::riesz(0.5, 3), InputError);

  // self-cell rules against brute-force polar quadrature over the equal-area disc
  const double h = 0.1, rho = h / std::sqrt(std::numbers::pi);
  double lg = 0.0, rz = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double r = (i + 0.5) * rho / N;
    lg += std::log(1 / r) * 2 * std::numbers::pi * r * rho / N;
    rz += std::pow(r, 0.5 - 2) * 2 * std::numbers::pi * r * rho / N;
  }
  CHECK(KernelSpec::log().self_cell(h) == doctest::Approx(lg / (2 * std::numbers::pi)).epsilon(1e-8));
  CHECK(KernelSpec::riesz(0.5).self_cell(h) == doctest::Approx(rz).epsilon(1e-3));
}

TEST_CASE("assembly") {
  const double h = 0.1;
  const Cell two[] = {{0, 0}, {1, 0}};
  const auto A = assemble(PixelMask::from_cells({0, 0}, h, two), KernelSpec::log());
  CHECK(A.entry(0, 1) == doctest::Approx(h * h / (2 * std::numbers::pi) * std::log(1 / h)).epsilon(1e-15));
  CHECK(A.entry(1, 0) == A.entry(0, 1));

  const auto B = assemble(mask_of(Ellipse{{0.1, 0}, 0.4, 0.25, 0.3}, 0.05), KernelSpec::riesz(1.0));
  const auto& D = B.dense();
  CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);

  setenv("LOGPOT_MAX_CELLS", "50", 1);
  CHECK_THROWS_WITH_AS(assemble(mask_of(Disc{{0, 0}, 0.5}, 0.05), KernelSpec::log()),
                       doctest::Contains("try h >="), InputError);
  setenv("LOGPOT_MAX_CELLS", "junk", 1);
  CHECK_THROWS_AS(default_max_cells(), InputError);
  unsetenv("LOGPOT_MAX_CELLS");
  CHECK(default_max_cells() == 20000);
}

TEST_CASE("FFT product matches the dense product") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  for (const auto& k : {KernelSpec::log(), KernelSpec::riesz(1.3)}) {
    const auto m = mask_of(Union{{Disc{{0, 0}, 0.5}, Rect{{0.3, -0.1}, {1.4, 0.15}}}}, 0.04);
    const auto fast = assemble(m, k);
    const auto slow = assemble(m, k);
    Eigen::VectorXd x(static_cast<Eigen::Index>(m->active_count()));
    for (auto& v : x) v = N(rng);
    Eigen::VectorXd y1, y2;
    fast.apply(x, y1);
    y2 = slow.dense() * x;
    CHECK((y1 - y2).norm() <= 1e-12 * y2.norm());
  }
}

TEST_CASE("Jacobi oracle agrees with the dense solver") {
  const auto A = assemble(mask_of(Ellipse{{0, 0}, 0.6, 0.3, 0.2}, 0.08), KernelSpec::log());
  const auto je = jacobi_eigen(A.dense());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.dense());
  CHECK((je.values - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-13);
  const auto r = extremal_eigs(A, 3, with(EigenMethod::Jacobi));
  const auto d = extremal_eigs(A, 3, with(EigenMethod::Dense));
  for (int i = 0; i < 3; ++i) CHECK(r.tau_top[i] == doctest::Approx(d.tau_top[i]).epsilon(1e-12));
  CHECK(r.tau_bottom == doctest::Approx(d.tau_bottom).epsilon(1e-9));
  for (double res : r.residuals) CHECK(res < 1e-10);
}

TEST_CASE("Lanczos agrees with the dense solver, including degenerate pairs") {
  for (const Shape& s : {Shape(Disc{{0, 0}, 1.0}), Shape(Disc{{0, 0}, 1.5}),
                         Shape(Ellipse{{0.2, 0}, 1.4, 0.8, 0.4})}) {
    const auto A = assemble(mask_of(s, 0.08), KernelSpec::log());
    const auto d = extremal_eigs(A, 4, with(EigenMethod::Dense));
    const auto l = extremal_eigs(A, 4, with(EigenMethod::Lanczos));
    for (int i = 0; i < 4; ++i) CHECK(l.tau_top[i] == doctest::Approx(d.tau_top[i]).epsilon(1e-9));
    for (std::size_t i = 0; i < l.tau_top.size(); ++i) CHECK(l.residuals[i] <= 1e-8);
    if (l.bottom_converged) CHECK(l.residuals.back() <= 1e-8);
    if (d.tau_bottom < -1e-3) {
      CHECK(l.bottom_converged);
      CHECK(l.tau_bottom == doctest::Approx(d.tau_bottom).epsilon(1e-9));
    }
    for (std::size_t i = 0; i < l.vectors.size(); ++i) CHECK(l.vectors[i].l2_norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("unrequired bottom may stay unconverged; required bottom throws") {
  const auto A = assemble(mask_of(Disc{{0, 0}, 0.4}, 0.04), KernelSpec::log());
  auto o = with(EigenMethod::Lanczos);
  o.bottom_budget = 3;
  const auto r = extremal_eigs(A, 1, o);
  CHECK(r.tau_top.size() == 1);
  o.require_bottom = true;
  o.max_restarts = 5;
  if (!r.bottom_converged) CHECK_THROWS_AS(extremal_eigs(A, 1, o), ConvergenceError);
}

TEST_CASE("rayleigh quotient") {
  const auto m = mask_of(Disc{{0, 0}, 0.5}, 0.05);
  const auto A = assemble(m, KernelSpec::log());
  const auto r = extremal_eigs(A, 2);
  CHECK(rayleigh(r.vectors[0], A) == doctest::Approx(r.tau_top[0]).epsilon(1e-10));
  const auto one = GridFunction::constant(m, 1.0);
  const double q = rayleigh(one, A);
  // direct double sum
  double e = 0.0;
  for (std::size_t i = 0; i < m->active_count(); ++i)
    for (std::size_t j = 0; j < m->active_count(); ++j) e += A.entry(i, j);
  CHECK(q == doctest::Approx(e / static_cast<double>(m->active_count())).epsilon(1e-12));
  CHECK(q > 0);
  CHECK(q <= r.tau_top[0]);
  CHECK(q >= r.tau_bottom);

  // orthogonal to the top vector
  Eigen::Map<const Eigen::VectorXd> v0(r.vectors[0].values().data(), static_cast<Eigen::Index>(m->active_count()));
  Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(v0.size(), -1, 2);
  w -= v0.dot(w) / v0.squaredNorm() * v0;
  const GridFunction gw(m, std::vector<double>(w.data(), w.data() + w.size()));
  CHECK(rayleigh(gw, A) <= r.tau_top[1] + 1e-8);
  CHECK_THROWS_AS(rayleigh(GridFunction::constant(m, 0.0), A), InputError);
}

TEST_CASE("discrete domain monotonicity") {
  const double h = 0.05;
  const auto inner = mask_of(Ellipse{{0, 0}, 0.3, 0.15, 0.0}, h);
  const auto outer = mask_of(Disc{{0, 0}, 0.45}, h);
  REQUIRE(is_subset(*inner, *outer));
  const auto a = extremal_eigs(assemble(inner, KernelSpec::log()), 1);
  const auto b = extremal_eigs(assemble(outer, KernelSpec::log()), 1);
  CHECK(a.tau_top[0] < b.tau_top[0]);
}

TEST_CASE("Richardson extrapolation") {
  std::vector<double> h{0.4, 0.2, 0.1}, v;
  for (double x : h) v.push_back(3.0 + 0.7 * x * x * x);
  const auto e = richardson(h, v);
  CHECK(!e.order_assumed);
  CHECK(e.order == doctest::Approx(3.0));
  CHECK(e.limit == doctest::Approx(3.0).epsilon(1e-12));
  const auto two = richardson({0.2, 0.1}, {3.04, 3.01});
  CHECK(two.order_assumed);
  CHECK(two.limit == doctest::Approx(3.0));
  const auto wild = richardson(h, {1.0, 2.0, 1.5});
  CHECK(wild.order_assumed);
  CHECK_THROWS_AS(richardson({}, {}), InputError);
  CHECK_THROWS_AS(refine_study(Disc{{0, 0}, 1}, KernelSpec::log(), {}), InputError);
}

TEST_CASE("refinement on a square is monotone in h") {
  EigOptions o;
  o.want_bottom = false;
  const auto t = refine_study(Rect{{-0.5, -0.5}, {0.5, 0.5}}, KernelSpec::log(), {0.1, 0.05, 0.025}, o);
  REQUIRE(t.rows.size() == 3);
  const double d1 = t.rows[1].tau_top - t.rows[0].tau_top, d2 = t.rows[2].tau_top - t.rows[1].tau_top;
  CHECK(d1 * d2 > 0);
  CHECK(std::abs(d2) < std::abs(d1));
}

TEST_CASE("sign check") {
  const auto small = mask_of(Disc{{0, 0}, 0.45}, 0.05);
  const auto rs = extremal_eigs(assemble(small, KernelSpec::log()), 1);
  const auto s = positive_sign_check(rs, *small);
  CHECK(!s.top_sign_change);
  CHECK(!s.flagged);
  CHECK(s.top_min > 0);

  const auto big = mask_of(Disc{{0, 0}, 2.0}, 0.1);
  const auto rb = extremal_eigs(assemble(big, KernelSpec::log()), 1);
  const auto b = positive_sign_check(rb, *big);
  CHECK(b.bottom_one_signed.value());
  CHECK(!b.flagged);
}
