#include "logpot/disc_spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "logpot/error.hpp"
#include "logpot/specfun.hpp"

namespace logpot {
namespace {

void require_radius(double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw InputError("disc radius must be positive and finite");
}

DiscEig nonradial(double R, int m, int n, Angular a) {
  const double j = specfun::bessel_zero(m - 1, n);
  return {m, n, R * R / (j * j), EigKind::Nonradial, 2, {m, n, R, j / R, a, Profile::J}};
}

bool before(const DiscEig& a, const DiscEig& b) {
  if (a.tau != b.tau) return a.tau > b.tau;
  if (a.m != b.m) return a.m < b.m;
  if (a.n != b.n) return a.n < b.n;
  return static_cast<int>(a.eigenfunction.angular) < static_cast<int>(b.eigenfunction.angular);
}

} // namespace

const char* kind_name(EigKind kind) {
  switch (kind) {
  case EigKind::Radial: return "radial";
  case EigKind::Nonradial: return "nonradial";
  case EigKind::Negative: return "negative";
  }
  return "?";
}

const char* angular_name(Angular a) {
  switch (a) {
  case Angular::None: return "none";
  case Angular::Cos: return "cos";
  case Angular::Sin: return "sin";
  }
  return "?";
}

std::vector<DiscEig> radial_eigs(double R, int count) {
  require_radius(R);
  if (count < 1) throw InputError("radial_eigs: count must be >= 1");
  std::vector<DiscEig> out;
  for (int n = 1; n <= count; ++n) {
    const double mu = specfun::mu_radial(R, n).value;
    out.push_back({0, n, R * R / (mu * mu), EigKind::Radial, 1, {0, n, R, mu / R, Angular::None, Profile::J}});
  }
  return out;
}

std::vector<DiscEig> nonradial_eigs(double R, int m_max, int n_max) {
  require_radius(R);
  std::vector<DiscEig> out;
  for (int m = 1; m <= m_max; ++m)
    for (int n = 1; n <= n_max; ++n) out.push_back(nonradial(R, m, n, Angular::Cos));
  std::sort(out.begin(), out.end(), before);
  return out;
}

DiscEig neg_eig(double R) {
  require_radius(R);
  if (R <= 1.0) throw InputError("operator positive, the infimum is 0 and not an eigenvalue (R <= 1)");
  const double mu = specfun::mu_modified(R).value;
  return {0, 1, -R * R / (mu * mu), EigKind::Negative, 1, {0, 1, R, mu / R, Angular::None, Profile::I0}};
}

std::vector<DiscEig> leading_eigs(double R, int count) {
  require_radius(R);
  if (count < 1) throw InputError("leading_eigs: count must be >= 1");
  std::vector<DiscEig> all = radial_eigs(R, count);
  for (int m = 1; m <= count; ++m)
    for (int n = 1; n <= count; ++n) {
      all.push_back(nonradial(R, m, n, Angular::Cos));
      all.push_back(nonradial(R, m, n, Angular::Sin));
    }
  std::sort(all.begin(), all.end(), before);
  all.resize(static_cast<std::size_t>(count));
  return all;
}

std::array<DiscEig, 3> top3(double R) {
  const auto v = leading_eigs(R, 3);
  return {v[0], v[1], v[2]};
}

double asymptotic_neg(double R) {
  require_radius(R);
  if (R <= 1.0) throw InputError("asymptotic_neg: requires R > 1");
  const double L = std::log(R);
  return L < 1.0 ? -R * R * L * L : -R * R * L / 2.0;
}

double eval_eigenfunction(const EigenfunctionSpec& spec, Vec2 p) {
  const double r = norm(p);
  if (r > spec.radius * (1.0 + 1e-12)) throw InputError("eval_eigenfunction: point outside the disc");
  const double t = spec.scale * std::min(r, spec.radius);
  const double radial = spec.profile == Profile::I0 ? specfun::bessel_i0(t) : specfun::bessel_j(spec.m, t);
  const double theta = std::atan2(p.y, p.x);
  switch (spec.angular) {
  case Angular::Cos: return radial * std::cos(spec.m * theta);
  case Angular::Sin: return radial * std::sin(spec.m * theta);
  case Angular::None: break;
  }
  return radial;
}

} // namespace logpot
