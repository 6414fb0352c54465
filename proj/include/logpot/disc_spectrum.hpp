#pragma once

#include <array>
#include <vector>

#include "logpot/vec2.hpp"

namespace logpot {

enum class EigKind { Radial, Nonradial, Negative };
enum class Angular { None, Cos, Sin };
enum class Profile { J, I0 };

/// u(r, theta) = profile_m(scale * r) * angular(m theta), defined for r <= radius.
struct EigenfunctionSpec {
  int m = 0;
  int n = 1;
  double radius = 1.0;
  double scale = 1.0;
  Angular angular = Angular::None;
  Profile profile = Profile::J;
};

/// Eigenvalue of the logarithmic potential operator on B_R.
struct DiscEig {
  int m = 0;
  int n = 1;
  double tau = 0.0;
  EigKind kind = EigKind::Radial;
  int multiplicity = 1;
  EigenfunctionSpec eigenfunction;
};

const char* kind_name(EigKind kind);
const char* angular_name(Angular a);

/// tau_{0,n}(B_R) = R^2 / mu_{0,n}(B_R)^2 for n = 1..count (descending).
std::vector<DiscEig> radial_eigs(double R, int count);

/// tau_{m,n}(B_R) = R^2 / j_{m-1,n}^2 for 1 <= m <= m_max, 1 <= n <= n_max,
/// sorted descending. Each entry has multiplicity 2 (cos profile recorded).
std::vector<DiscEig> nonradial_eigs(double R, int m_max, int n_max);

/// The negative eigenvalue -R^2 / mu_0(B_R)^2; throws for R <= 1.
DiscEig neg_eig(double R);

/// The `count` largest positive eigenvalues repeated according to
/// multiplicity (cos and sin partners listed separately), descending.
std::vector<DiscEig> leading_eigs(double R, int count);

/// The three largest positive eigenvalues.
std::array<DiscEig, 3> top3(double R);

/// Piecewise surrogate: -R^2 (log R)^2 for log R < 1, else -R^2 log R / 2.
double asymptotic_neg(double R);

double eval_eigenfunction(const EigenfunctionSpec& spec, Vec2 p);

} // namespace logpot
