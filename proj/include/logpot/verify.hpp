#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "logpot/mask.hpp"
#include "logpot/rearrange.hpp"
#include "logpot/shape.hpp"
#include "logpot/solver.hpp"

namespace logpot {

enum class Verdict { Pass, Fail, Inconclusive, InconclusiveSupporting, CounterexampleCandidate };

const char* verdict_name(Verdict v);

using ParamValue = std::variant<double, std::string, std::vector<double>>;

struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, ParamValue>> parameters;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> samples;
  Verdict verdict = Verdict::Inconclusive;
  double tolerance_used = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> notes;

  std::vector<double> column(const std::string& name) const;
  double summary_value(const std::string& key) const;
};

/// Options shared by the eigenvalue experiments.
struct RunOptions {
  EigOptions eig;
  AssembleOptions assemble;
  bool refine_probe = true;  // sweeps: recompute the endpoints at h/2
  int threads = 1;
};

/// Pass when every consecutive difference has the sign of `direction`
/// (+1 increasing, -1 decreasing) and exceeds factor * uncertainty in size;
/// Fail when some difference has the wrong sign beyond that threshold;
/// Inconclusive otherwise. Fewer than two values pass trivially.
Verdict monotone_verdict(const std::vector<double>& values, double uncertainty, int direction,
                         double factor = 3.0);

/// h^2 u^T A u: the discrete double sum for sum_ij u_i u_j W(x_i - x_j).
double discrete_energy(const GridFunction& u, const KernelSpec& kernel);

/// I(P_H u) - I(u) accumulated over pairs of reflection orbits in long double.
double check_riesz_polarization(const GridFunction& u, const Polarizer& H, const KernelSpec& kernel);

/// Random (mask, u >= 0, grid-compatible H) triple for the property suite.
struct RieszCase {
  GridFunction u;
  Polarizer H;
};
RieszCase random_riesz_case(std::uint64_t seed, double h = 0.1);

ExperimentReport riesz_suite(const KernelSpec& kernel, int cases, std::uint64_t seed);

struct GapResult {
  double tau;             // tau_1 of the original mask
  double tau_rearranged;  // tau_1 of the rearranged mask
  double gap;
  double tolerance;       // solver tolerance on each eigenvalue
  std::size_t cells;
  double diameter;
  bool hypothesis_verified;  // mask diameter <= 1
};

GapResult reverse_fk_polarization(const Shape& shape, const Polarizer& H, double h, bool force = false,
                                  const RunOptions& opts = {});
GapResult reverse_fk_polarization(const PixelMask& mask, const Polarizer& H, bool force = false,
                                  const RunOptions& opts = {});
GapResult reverse_fk_schwarz(const Shape& shape, double h, bool force = false, const RunOptions& opts = {});
GapResult reverse_fk_schwarz(const PixelMask& mask, bool force = false, const RunOptions& opts = {});

/// Pass when gap >= -tolerance; summary "strict" is 1 when gap > 3 tolerance.
ExperimentReport gap_report(const std::string& name, const GapResult& g);

ExperimentReport annulus_sweep(double R, double r, const std::vector<double>& t_values, double h,
                               const RunOptions& opts = {});

enum class ObstacleKind { Translate, Rotate };

/// Translate family: domain minus (obstacle + s * direction).
struct TranslateFamily {
  Shape domain;
  Shape obstacle;
  Vec2 direction;
};

/// Square of half-side 0.35 with a square obstacle of half-side 0.1 slid
/// along the diagonal; the obstacle edges stay on grid lines for h | 0.05.
TranslateFamily default_translate_family();

/// Disc of radius 0.48 without the sector |arg x - pi| <= pi/4, minus a small
/// diamond centred at 0.3 (cos theta, sin theta).
Shape rotate_family(double theta);

ExperimentReport obstacle_sweep(ObstacleKind kind, const std::vector<double>& params, double h,
                                const RunOptions& opts = {},
                                const TranslateFamily& family = default_translate_family());

Shape two_balls(double d);
ExperimentReport two_ball_sweep(const std::vector<double>& d_values, double h, const RunOptions& opts = {});

/// Two squares joined by a horizontal corridor, sized on the grid of spacing h
/// so that the total area is close to c.
Shape dumbbell(double c, double d, double h);
ExperimentReport dumbbell_sweep(double c, const std::vector<double>& d_values, double h,
                                const RunOptions& opts = {});

/// Largest r with B_r(x) inside the union of the cells, over active centres x.
double inscribed_radius(const PixelMask& mask);
/// Smallest enclosing circle of the cell squares.
struct Circle {
  Vec2 center;
  double radius = 0.0;
};
Circle enclosing_circle(const PixelMask& mask);
Circle min_enclosing_circle(std::vector<Vec2> points);

ExperimentReport sandwich_check(const Shape& shape, double h, const RunOptions& opts = {});

ExperimentReport domain_monotonicity_check(const Shape& inner, const Shape& outer, double h,
                                           const RunOptions& opts = {});

ExperimentReport polarization_flow(const GridFunction& u, int steps, std::uint64_t seed,
                                   const KernelSpec& kernel = KernelSpec::log());

enum class ConjectureKind { TdiamPolarization, NegativeFaberKrahn };

struct ScanConfig {
  int cases = 20;
  double h = 0.0;           // 0: 0.05 for tdiam_pol, 0.15 for neg_fk_pol
  double tolerance = 0.0;   // 0: 0.02 relative for tdiam_pol, 1e-6 relative for neg_fk_pol
};

ExperimentReport conjecture_scan(ConjectureKind kind, const ScanConfig& cfg, std::uint64_t seed,
                                 const RunOptions& opts = {});

} // namespace logpot
