#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logpot/mask.hpp"
#include "logpot/shape.hpp"

namespace logpot {

struct FeketeResult {
  int n = 0;
  std::vector<Vec2> points;
  double rho_n = 0.0;
  int restarts_used = 0;
  int sweeps = 0;
};

struct FeketeOptions {
  int restarts = 4;
  int max_n = 40;
  int max_sweeps = 200000;
  std::uint64_t seed = 0;
};

/// [prod_{i<j} |x_i - x_j|]^{2 / (n (n - 1))}.
double product_mean(const std::vector<Vec2>& points);

/// Local maximiser of the pairwise distance product over the closed shape,
/// best of opts.restarts seeded random starts.
FeketeResult rho_n(const Shape& shape, int n, const FeketeOptions& opts = {});

struct RobinResult {
  std::vector<Vec2> nodes;
  std::vector<double> lengths;
  std::vector<double> weights;
  double V_E = 0.0;
  double tdiam = 0.0;
  std::string method;       // "kkt" or "projected-gradient"
  bool mask_fallback = false;
  int iterations = 0;
};

/// Minimises w^T G w over the simplex for boundary nodes of the outer
/// boundary (exposed cell centres of a rasterisation when the shape has no
/// parameterised outer boundary).
RobinResult robin_constant(const Shape& shape, int node_count = 512);
/// Same minimisation on the exposed cell centres of a mask (length h each).
RobinResult robin_constant(const PixelMask& mask);

struct TdiamEstimate {
  double tdiam = 0.0;                 // Robin value
  RobinResult robin;
  std::vector<double> rho_sequence;   // rho_2, rho_3, ...
  bool upper_bound_consistent = true; // every rho_n >= tdiam (1 - tolerance)
  double tolerance = 0.02;
};

TdiamEstimate tdiam_estimate(const Shape& shape, int n_max = 12, int node_count = 512,
                             const FeketeOptions& fekete = {});

enum class Positivity { Positive, Indefinite, Inconclusive };

const char* positivity_name(Positivity p);

struct PositivityResult {
  Positivity cls = Positivity::Inconclusive;
  double tdiam = 0.0;
  double band = 0.02;
};

/// Positive iff T_diam <= 1; inside |T - 1| < band the result is Inconclusive.
PositivityResult positivity_classifier(const Shape& shape, double band = 0.02, int n_max = 12,
                                       int node_count = 512);

} // namespace logpot
