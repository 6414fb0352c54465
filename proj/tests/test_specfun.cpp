#include "doctest.h"

#include <cmath>
#include <numbers>

#include "logpot/error.hpp"
#include "logpot/specfun.hpp"

using namespace logpot;
using namespace logpot::specfun;

namespace {

// Values frozen from mpmath at 30 digits.
struct JRef { int m; double t; double v; };
constexpr JRef kJ[] = {
    {0, 0.5, 0.93846980724081290423}, {0, 7.3, 0.28821694763501439904},
    {0, 13.0, 0.206926102377067811},  {1, 25.0, -0.12535024958028990465},
    {0, 49.5, 0.0019720993620572776198}, {5, 3.0, 0.043028434877047583925},
    {5, 40.0, 0.12257346597711778699}, {20, 30.0, 0.0048310199934040645386},
    {3, 12.5, 0.11000813631434926814},
};

struct IRef { double t; double i0; double i1; };
constexpr IRef kI[] = {
    {0.5, 1.0634833707413235193, 0.25789430539089631636},
    {2.0, 2.2795853023360672674, 1.5906368546373290634},
    {10.0, 2815.7166284662544715, 2670.9883037012546543},
    {14.9, 308375.57868743919987, 297840.69477957431056},
    {15.1, 374103.41119040898511, 361495.56618540161106},
    {50.0, 2.9325537838493363267e+20, 2.9030785901035567968e+20},
    {300.0, 4.4758473679350521181e+128, 4.4683813850369544139e+128},
    {700.0, 1.5295933476718737363e+302, 1.5285003902339006881e+302},
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_CASE("bessel_j matches reference values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  for (const auto& r : kJ) {
    INFO("m=" << r.m << " t=" << r.t);
    // near a zero the relative error is meaningless; fall back to absolute
    CHECK(std::abs(bessel_j(r.m, r.t) - r.v) <= 1e-12 * std::max(std::abs(r.v), 1e-2));
  }
}

TEST_CASE("bessel_j continuity at the series/recurrence switch") {
  for (int m : {0, 1, 4}) {
    const double a = bessel_j(m, 12.0), b = bessel_j(m, std::nextafter(12.0, 13.0));
    CHECK(std::abs(a - b) < 1e-13);
  }
}

TEST_CASE("modified Bessel values") {
  CHECK(bessel_i0(0.0) == 1.0);
  CHECK(bessel_i0p(0.0) == 0.0);
  for (const auto& r : kI) {
    INFO("t=" << r.t);
    CHECK(rel(bessel_i0(r.t), r.i0) < 1e-12);
    CHECK(rel(bessel_i0p(r.t), r.i1) < 1e-12);
  }
  CHECK_THROWS_AS(bessel_i0(720.0), InputError);
  CHECK(std::isfinite(bessel_i0e(1e6)));
}

TEST_CASE("I0 satisfies its ODE") {
  for (double t : {0.5, 2.0, 10.0}) {
    const double d = 1e-4 * std::max(1.0, t);
    const double i = bessel_i0(t);
    const double ip = (bessel_i0(t + d) - bessel_i0(t - d)) / (2 * d);
    const double ipp = (bessel_i0(t + d) - 2 * i + bessel_i0(t - d)) / (d * d);
    CHECK(std::abs(t * t * ipp + t * ip - t * t * i) < 1e-5 * t * t * i);
  }
}

TEST_CASE("Bessel zeros") {
  CHECK(std::abs(bessel_zero(1, 1) - 3.8317) <= 5e-4);
  CHECK(std::abs(bessel_zero(0, 2) - 5.5201) <= 5e-4);
  CHECK(std::abs(bessel_zero(0, 1) - 2.404826) <= 1e-6);
  CHECK(std::abs(bessel_zero(0, 1) - 2.4048255576957727686) < 1e-14);
  CHECK(std::abs(bessel_zero(0, 10) - 30.634606468431975118) < 1e-12);
  CHECK(std::abs(bessel_zero(3, 4) - 16.223466160318768122) < 1e-12);
  for (int m = 0; m < 5; ++m) {
    const auto z = bessel_zeros(m, 8);
    const auto zn = bessel_zeros(m + 1, 8);
    for (int n = 0; n < 8; ++n) {
      CHECK(std::abs(bessel_j(m, z[n])) <= 1e-12);
      if (n > 0) CHECK(z[n] > z[n - 1]);
      CHECK(z[n] < zn[n]);
      if (n + 1 < 8) CHECK(zn[n] < z[n + 1]);
    }
  }
}

TEST_CASE("radial boundary roots") {
  for (int n = 1; n <= 4; ++n) CHECK(mu_radial(1.0, n).value == bessel_zero(0, n));
  const double j01 = bessel_zero(0, 1), j11 = bessel_zero(1, 1);
  const double a = mu_radial(0.5, 1).value;
  CHECK(a > 0);
  CHECK(a < j01);
  CHECK(std::abs(a - 1.4374757366775819502) < 1e-12);
  const double b = mu_radial(2.0, 1).value;
  CHECK(b > j01);
  CHECK(b < j11);
  CHECK(std::abs(b - 3.4556098543169984465) < 1e-12);
  CHECK(std::abs(mu_radial(0.5, 2).value - 4.1780341040121202843) < 1e-12);

  for (double R : {0.2, 0.5, 0.9, 1.1, 2.0, 7.0}) {
    for (int n = 1; n <= 5; ++n) {
      const auto root = mu_radial(R, n);
      const double mu = root.value, jp = -bessel_j(1, mu);
      CHECK(std::abs(radial_condition(R, mu)) <= 1e-10 * std::max(1.0, std::abs(jp)));
      if (R < 1 && n >= 2) {
        CHECK(mu > bessel_zero(0, n - 1));
        CHECK(mu < bessel_zero(0, n));
      }
      if (R > 1) {
        CHECK(mu > bessel_zero(0, n));
        CHECK(mu < bessel_zero(0, n + 1));
      }
    }
  }
  CHECK_THROWS_AS(mu_radial(-1.0, 1), InputError);
}

TEST_CASE("modified boundary root") {
  CHECK_THROWS_AS(mu_modified(1.0), InputError);
  CHECK_THROWS_AS(mu_modified(0.5), InputError);
  CHECK(std::abs(mu_modified(std::numbers::e).value - 1.6082794717268792669) < 1e-12);
  const double near1 = mu_modified(1.01).value;
  CHECK(std::abs(near1 - 101.00042087290685858) < 1e-9);
  CHECK(std::abs(near1 * std::log(1.01) - 1.0) < 0.02);
  CHECK(mu_modified(1.5).value > mu_modified(3.0).value);
  CHECK(std::abs(mu_modified(100.0).value - 0.67729977383412652911) < 1e-12);
  CHECK(std::abs(mu_modified(1000.0).value - 0.54796266675693419895) < 1e-12);
  double prev = 1e300;
  for (double R = 1.05; R < 50; R *= 1.3) {
    const double mu = mu_modified(R).value;
    CHECK(mu < prev);
    CHECK(std::abs(modified_condition_scaled(R, mu)) < 1e-13);
    prev = mu;
  }
}

TEST_CASE("ratio functions") {
  CHECK(std::abs(g_ratio(0.01) / (0.01 * 0.01 / 2) - 1.0) < 1e-4);
  CHECK(g_ratio(0.0) == 0.0);
  double prev = 0.0;
  for (double t = 0.05; t <= 20.0; t += 0.05) {
    const double g = g_ratio(t);
    CHECK(g > prev);
    prev = g;
  }
  CHECK(g_ratio(20.0) > 15.0);
  const double j01 = bessel_zero(0, 1);
  for (double t = 0.05; t < j01 - 0.01; t += 0.05) CHECK(h_ratio(t) < 0.0);
  CHECK_THROWS_AS(h_ratio(j01), InputError);
  CHECK_THROWS_AS(f_ratio(0.0), InputError);
  CHECK_THROWS_AS(f_ratio(bessel_zero(1, 1)), InputError);
  CHECK(f_ratio(1.0) == doctest::Approx(-bessel_j(0, 1.0) / bessel_j(1, 1.0)));
}
