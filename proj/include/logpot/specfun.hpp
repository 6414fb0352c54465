#pragma once

#include <vector>

namespace logpot::specfun {

/// J_m(t) for m >= 0, t >= 0. Power series (extended precision) for t <= 12,
/// Miller backward recurrence beyond.
double bessel_j(int m, double t);

/// I_0(t) and its derivative I_0'(t) = I_1(t), t >= 0. Throws when I_0
/// overflows a double (t > ~713).
double bessel_i0(double t);
double bessel_i0p(double t);

/// exp(-t) I_0(t) and exp(-t) I_1(t); finite for every t >= 0.
double bessel_i0e(double t);
double bessel_i1e(double t);

/// n-th positive zero j_{m,n} of J_m (n >= 1).
double bessel_zero(int m, int n);

/// j_{m,1}, ..., j_{m,count}.
std::vector<double> bessel_zeros(int m, int count);

enum class RootKind { Oscillatory, Modified };

struct BoundaryRoot {
  double radius = 1.0;
  int n = 1;
  double value = 0.0;
  RootKind kind = RootKind::Oscillatory;
};

/// mu_{0,n}(B_R): n-th positive root of J_0(t) - log(R) t J_0'(t).
BoundaryRoot mu_radial(double R, int n);

/// Residual J_0(t) - log(R) t J_0'(t) of the radial boundary condition.
double radial_condition(double R, double t);

/// mu_0(B_R), R > 1: the unique positive root of I_0(t) - log(R) t I_0'(t).
BoundaryRoot mu_modified(double R);

/// exp(-t) (I_0(t) - log(R) t I_0'(t)).
double modified_condition_scaled(double R, double t);

/// t I_0'(t) / I_0(t).
double g_ratio(double t);
/// -t J_1(t) / J_0(t) = t J_0'(t) / J_0(t).
double h_ratio(double t);
/// -J_0(t) / (t J_1(t)).
double f_ratio(double t);

} // namespace logpot::specfun
