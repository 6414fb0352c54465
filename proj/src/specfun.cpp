#include "logpot/specfun.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "logpot/error.hpp"

namespace logpot::specfun {
namespace {

constexpr double kJSwitch = 12.0;
constexpr double kISwitch = 15.0;
constexpr double kScanStep = std::numbers::pi / 8.0;
constexpr double kPoleTol = 1e-14;

void require_nonneg(double t, const char* fn) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw InputError(std::string(fn) + ": argument must be finite and nonnegative");
}

long double j_series(int m, double t) {
  const long double x = static_cast<long double>(t) / 2.0L;
  long double lead = 1.0L;
  for (int k = 1; k <= m; ++k) lead *= x / k;
  if (lead == 0.0L) return 0.0L;
  const long double x2 = x * x;
  long double term = lead, sum = lead;
  for (int k = 1; k < 500; ++k) {
    term *= -x2 / (static_cast<long double>(k) * (m + k));
    sum += term;
    if (std::fabs(term) < 1e-24L * std::fabs(sum) && k > x) break;
  }
  return sum;
}

// Miller's algorithm normalised by J_0 + 2 sum_k J_{2k} = 1.
double j_miller(int m, double t) {
  const double top = std::max(static_cast<double>(m), t);
  int start = static_cast<int>(top + 30.0 + 2.0 * std::sqrt(40.0 * top));
  start += start % 2;
  double next = 0.0, cur = 1e-300, result = 0.0, norm = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = (2.0 * k / t) * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      result *= 1e-250;
      norm *= 1e-250;
    }
    // cur now holds J_{k-1} up to scale.
    if (k - 1 == m) result = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
  }
  norm += cur;
  return result / norm;
}

// Series for exp(-t) I_0(t) and exp(-t) I_1(t).
void i_series_scaled(double t, double& i0e, double& i1e) {
  const double x2 = 0.25 * t * t;
  double term0 = 1.0, sum0 = 1.0;
  double term1 = 0.5 * t, sum1 = term1;
  for (int k = 1; k < 500; ++k) {
    term0 *= x2 / (static_cast<double>(k) * k);
    term1 *= x2 / (static_cast<double>(k) * (k + 1));
    sum0 += term0;
    sum1 += term1;
    if (term0 < 1e-18 * sum0 && term1 < 1e-18 * sum1) break;
  }
  const double e = std::exp(-t);
  i0e = sum0 * e;
  i1e = sum1 * e;
}

// Hankel expansion exp(-t) I_nu(t) ~ (2 pi t)^{-1/2} sum_k (-1)^k a_k(nu) / t^k.
double i_asymptotic_scaled(int nu, double t) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0, last = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (k * 8.0 * t);
    if (std::abs(term) > std::abs(last)) break;
    sum += term;
    last = term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * t);
}

double bessel_jp(int m, double t) {
  if (m == 0) return -bessel_j(1, t);
  return 0.5 * (bessel_j(m - 1, t) - bessel_j(m + 1, t));
}

// Safeguarded Newton on a sign-changing bracket [a, b].
template <class F, class DF>
double bracketed_root(F f, DF df, double a, double b) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw Error("root bracket does not change sign");
  double lo = a, hi = b;
  if (fa > 0) std::swap(lo, hi);  // f(lo) < 0 < f(hi)
  double x = 0.5 * (a + b);
  for (int it = 0; it < 300; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0) lo = x;
    else hi = x;
    const double d = df(x);
    double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    const double left = std::min(lo, hi), right = std::max(lo, hi);
    if (!(next > left && next < right)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * DBL_EPSILON * std::abs(next)) return next;
    if (std::abs(right - left) <= 4.0 * DBL_EPSILON * std::abs(x)) return next;
    x = next;
  }
  return x;
}

class ZeroTables {
public:
  std::vector<double> get(int m, int count) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& tab = tables_[m];
    double t = tab.empty() ? std::max(kScanStep, static_cast<double>(m)) : tab.back() + kScanStep;
    double ft = bessel_j(m, t);
    while (static_cast<int>(tab.size()) < count) {
      const double u = t + kScanStep;
      const double fu = bessel_j(m, u);
      if ((ft > 0) != (fu > 0) || fu == 0.0) {
        const double z = bracketed_root([m](double s) { return bessel_j(m, s); },
                                        [m](double s) { return bessel_jp(m, s); }, t, u);
        tab.push_back(z);
        t = z + kScanStep;
        ft = bessel_j(m, t);
        continue;
      }
      t = u;
      ft = fu;
    }
    return {tab.begin(), tab.begin() + count};
  }

private:
  std::mutex mu_;
  std::map<int, std::vector<double>> tables_;
};

ZeroTables& zero_tables() {
  static ZeroTables tables;
  return tables;
}

} // namespace

double bessel_j(int m, double t) {
  require_nonneg(t, "bessel_j");
  if (m < 0) throw InputError("bessel_j: order must be nonnegative");
  if (t == 0.0) return m == 0 ? 1.0 : 0.0;
  if (t <= kJSwitch) return static_cast<double>(j_series(m, t));
  return j_miller(m, t);
}

double bessel_i0e(double t) {
  require_nonneg(t, "bessel_i0e");
  if (t <= kISwitch) {
    double a, b;
    i_series_scaled(t, a, b);
    return a;
  }
  return i_asymptotic_scaled(0, t);
}

double bessel_i1e(double t) {
  require_nonneg(t, "bessel_i1e");
  if (t <= kISwitch) {
    double a, b;
    i_series_scaled(t, a, b);
    return b;
  }
  return i_asymptotic_scaled(1, t);
}

namespace {
double unscale(double scaled, double t, const char* fn) {
  const double log_value = t + std::log(scaled);
  if (log_value >= std::log(DBL_MAX)) throw InputError(std::string(fn) + ": overflow");
  return t <= kISwitch ? scaled * std::exp(t) : std::exp(log_value);
}
} // namespace

double bessel_i0(double t) { return unscale(bessel_i0e(t), t, "bessel_i0"); }

double bessel_i0p(double t) {
  if (t == 0.0) return 0.0;
  return unscale(bessel_i1e(t), t, "bessel_i0p");
}

std::vector<double> bessel_zeros(int m, int count) {
  if (m < 0 || count < 0) throw InputError("bessel_zeros: need m >= 0, count >= 0");
  if (count == 0) return {};
  return zero_tables().get(m, count);
}

double bessel_zero(int m, int n) {
  if (n < 1) throw InputError("bessel_zero: n must be >= 1");
  return bessel_zeros(m, n).back();
}

double radial_condition(double R, double t) {
  return bessel_j(0, t) + std::log(R) * t * bessel_j(1, t);
}

BoundaryRoot mu_radial(double R, int n) {
  if (!(R > 0.0) || !std::isfinite(R)) throw InputError("mu_radial: R must be positive");
  if (n < 1) throw InputError("mu_radial: n must be >= 1");
  BoundaryRoot out{R, n, 0.0, RootKind::Oscillatory};
  if (R == 1.0) {
    out.value = bessel_zero(0, n);
    return out;
  }
  const double L = std::log(R);
  const auto zeros = bessel_zeros(0, n + 1);
  double a, b;
  if (R < 1.0) {
    a = (n == 1) ? 0.0 : zeros[n - 2];
    b = zeros[n - 1];
  } else {
    a = zeros[n - 1];
    b = zeros[n];
  }
  out.value = bracketed_root([L](double t) { return bessel_j(0, t) + L * t * bessel_j(1, t); },
                             [L](double t) { return -bessel_j(1, t) + L * t * bessel_j(0, t); }, a, b);
  return out;
}

double modified_condition_scaled(double R, double t) {
  return bessel_i0e(t) - std::log(R) * t * bessel_i1e(t);
}

BoundaryRoot mu_modified(double R) {
  if (!(R > 1.0) || !std::isfinite(R))
    throw InputError("mu_modified: no negative eigenvalue for R <= 1");
  const double L = std::log(R);
  auto g = [L](double t) { return bessel_i0e(t) - L * t * bessel_i1e(t); };
  auto dg = [L, g](double t) { return bessel_i1e(t) - L * t * bessel_i0e(t) - g(t); };
  double hi = 1.0;
  while (g(hi) >= 0.0) {
    hi *= 2.0;
    if (hi > 1e15) throw ConvergenceError("mu_modified: could not bracket root", hi);
  }
  BoundaryRoot out{R, 1, bracketed_root(g, dg, 0.0, hi), RootKind::Modified};
  return out;
}

double g_ratio(double t) {
  require_nonneg(t, "g_ratio");
  if (t == 0.0) return 0.0;
  return t * bessel_i1e(t) / bessel_i0e(t);
}

double h_ratio(double t) {
  require_nonneg(t, "h_ratio");
  const double den = bessel_j(0, t);
  if (std::abs(den) < kPoleTol) throw InputError("h_ratio: pole (J_0(t) = 0)");
  return -t * bessel_j(1, t) / den;
}

double f_ratio(double t) {
  require_nonneg(t, "f_ratio");
  const double den = t * bessel_j(1, t);
  if (std::abs(den) < kPoleTol) throw InputError("f_ratio: pole (t J_1(t) = 0)");
  return -bessel_j(0, t) / den;
}

} // namespace logpot::specfun
