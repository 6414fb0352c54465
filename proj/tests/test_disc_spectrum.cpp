#include "doctest.h"

#include <cmath>
#include <numbers>

#include "logpot/disc_spectrum.hpp"
#include "logpot/error.hpp"
#include "logpot/specfun.hpp"

using namespace logpot;
using specfun::bessel_zero;

namespace {

double polar_inner(const EigenfunctionSpec& a, const EigenfunctionSpec& b, double R) {
  const int nr = 300, nt = 128;
  double s = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * R / nr;
    for (int k = 0; k < nt; ++k) {
      const double th = (k + 0.5) * 2 * std::numbers::pi / nt;
      const Vec2 p{r * std::cos(th), r * std::sin(th)};
      s += eval_eigenfunction(a, p) * eval_eigenfunction(b, p) * r;
    }
  }
  return s * (R / nr) * (2 * std::numbers::pi / nt);
}

} // namespace

TEST_CASE("radial eigenvalues") {
  const double j01 = bessel_zero(0, 1), j02 = bessel_zero(0, 2);
  const auto r1 = radial_eigs(1.0, 1);
  CHECK(r1[0].tau == doctest::Approx(1 / (j01 * j01)).epsilon(1e-15));
  const auto half = radial_eigs(0.5, 2);
  CHECK(half[1].tau > 0.25 / (j02 * j02));
  CHECK(half[1].tau < 0.25 / (j01 * j01));
  const auto two = radial_eigs(2.0, 1);
  CHECK(two[0].tau > 4 / (j02 * j02));
  CHECK(two[0].tau < 4 / (j01 * j01));
  for (double R : {0.3, 1.0, 2.5}) {
    const auto v = radial_eigs(R, 5);
    for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k].tau < v[k - 1].tau);
  }
}

TEST_CASE("nonradial eigenvalues") {
  const double j01 = bessel_zero(0, 1);
  const auto one = nonradial_eigs(1.0, 1, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].tau == doctest::Approx(1 / (j01 * j01)).epsilon(1e-15));
  CHECK(one[0].multiplicity == 2);
  for (double R : {0.4, 3.0}) {
    const auto a = nonradial_eigs(R, 4, 3), b = nonradial_eigs(1.0, 4, 3);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].tau == doctest::Approx(R * R * b[k].tau).epsilon(1e-15));
  }
  const auto v = nonradial_eigs(1.7, 3, 3);
  bool found = false;
  for (const auto& e : v)
    if (e.m == 2 && e.n == 1) {
      found = true;
      CHECK(std::abs(std::sqrt(1.7 * 1.7 / e.tau) - 3.8317) <= 5e-4);
    }
  CHECK(found);
}

TEST_CASE("negative eigenvalue and asymptotics") {
  CHECK_THROWS_AS(neg_eig(1.0), InputError);
  CHECK_THROWS_AS(asymptotic_neg(0.9), InputError);
  const double R1 = 1.0001;
  CHECK(neg_eig(R1).tau / (-R1 * R1 * std::log(R1) * std::log(R1)) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(neg_eig(1000).tau / (-1e6 * std::log(1000.0) / 2) == doctest::Approx(1.0).epsilon(0.15));
  const double e = std::numbers::e, mu = specfun::mu_modified(e).value;
  CHECK(neg_eig(e).tau == doctest::Approx(-e * e / (mu * mu)).epsilon(1e-15));
  CHECK(asymptotic_neg(1.01) == doctest::Approx(-1.01 * 1.01 * std::pow(std::log(1.01), 2)));
  const double E4 = std::exp(4.0);
  CHECK(asymptotic_neg(E4) == doctest::Approx(-2 * E4 * E4));
  for (double R : {1.01, 100.0}) {
    const double ratio = asymptotic_neg(R) / neg_eig(R).tau;
    CHECK(ratio >= 0.8);
    CHECK(ratio <= 1.2);
  }
}

TEST_CASE("top three eigenvalues") {
  const double j01 = bessel_zero(0, 1);
  const auto t1 = top3(1.0);
  for (const auto& e : t1) CHECK(e.tau == doctest::Approx(1 / (j01 * j01)).epsilon(1e-14));

  const auto th = top3(0.5);
  const double mu = specfun::mu_radial(0.5, 1).value;
  CHECK(th[0].kind == EigKind::Radial);
  CHECK(th[0].tau == doctest::Approx(0.25 / (mu * mu)));
  CHECK(th[1].kind == EigKind::Nonradial);
  CHECK(th[2].kind == EigKind::Nonradial);
  CHECK(th[1].tau == doctest::Approx(0.25 / (j01 * j01)));
  CHECK(th[2].tau == th[1].tau);

  const auto t2 = top3(2.0);
  const double mu2 = specfun::mu_radial(2.0, 1).value;
  CHECK(t2[0].kind == EigKind::Nonradial);
  CHECK(t2[1].kind == EigKind::Nonradial);
  CHECK(t2[2].kind == EigKind::Radial);
  CHECK(t2[0].tau == doctest::Approx(4 / (j01 * j01)));
  CHECK(t2[2].tau == doctest::Approx(4 / (mu2 * mu2)));
}

TEST_CASE("eigenfunction evaluation and boundary conditions") {
  const auto rad = radial_eigs(0.8, 1)[0].eigenfunction;
  CHECK(eval_eigenfunction(rad, {0, 0}) == 1.0);
  const auto nr = nonradial_eigs(1.0, 1, 1)[0].eigenfunction;
  CHECK(eval_eigenfunction(nr, {0, 0}) == 0.0);
  CHECK_THROWS_AS(eval_eigenfunction(rad, {1, 0}), InputError);

  const double R = 2.0;
  const auto neg = neg_eig(R).eigenfunction;
  const double mu = neg.scale * R;
  CHECK(eval_eigenfunction(neg, {R, 0}) == doctest::Approx(specfun::bessel_i0(mu)).epsilon(1e-14));
  CHECK(specfun::bessel_i0(mu) == doctest::Approx(std::log(R) * mu * specfun::bessel_i0p(mu)).epsilon(1e-12));

  for (double Rr : {0.5, 1.5}) {
    for (const auto& e : radial_eigs(Rr, 3)) {
      const double x = e.eigenfunction.scale * Rr;
      const double phi = specfun::bessel_j(0, x), dphi = -e.eigenfunction.scale * specfun::bessel_j(1, x);
      CHECK(std::abs(phi - Rr * std::log(Rr) * dphi) < 1e-12);
    }
    for (const auto& e : nonradial_eigs(Rr, 3, 2)) {
      const int m = e.m;
      const double s = e.eigenfunction.scale, x = s * Rr;
      const double phi = specfun::bessel_j(m, x);
      const double dphi = s * 0.5 * (specfun::bessel_j(m - 1, x) - specfun::bessel_j(m + 1, x));
      CHECK(std::abs(m * phi + Rr * dphi) < 1e-12);
    }
  }
}

TEST_CASE("sampled eigenfunctions are orthogonal") {
  const double R = 1.3;
  std::vector<EigenfunctionSpec> specs;
  for (const auto& e : leading_eigs(R, 8)) specs.push_back(e.eigenfunction);
  specs.push_back(neg_eig(R).eigenfunction);
  for (std::size_t a = 0; a < specs.size(); ++a)
    for (std::size_t b = a + 1; b < specs.size(); ++b) {
      const double ab = polar_inner(specs[a], specs[b], R);
      const double na = std::sqrt(polar_inner(specs[a], specs[a], R));
      const double nb = std::sqrt(polar_inner(specs[b], specs[b], R));
      CHECK(std::abs(ab) <= 1e-3 * na * nb);
    }
}
